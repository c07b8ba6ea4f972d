"""Suite configuration files and end-to-end orchestration.

A suite file is INI-style: one ``[suite]`` section, one ``[protocol]``
section and any number of ``[variant: <name>]`` sections, measured in file
order::

    [suite]
    title = Benchmark results for startup (noop.rs)
    outputs = markdown csv json boxplot
    output_dir = results
    name = startup

    [protocol]
    warmups = 5
    iterations = 50
    prepare = sync; echo 3 > /proc/sys/vm/drop_caches
    high_priority = true
    cpu_set = 24-47
    use_shell = false
    tolerate_failures = false

    [variant: Native x86-musl]
    command = ./noop.musl
    workdir = build
    env = RUST_BACKTRACE=0

``command`` is split with shell quoting rules into argv tokens; no shell
is involved unless ``use_shell`` is true. ``prepare`` is always handed to
``/bin/sh -c`` since it is never timed. ``env`` holds whitespace separated
``KEY=VALUE`` pairs added on top of the inherited environment.
"""

from __future__ import annotations

import configparser
import logging
import os
import shlex
import shutil
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from . import report as rep
from .measure import (
    ExecutionVariant,
    MeasurementError,
    MeasurementProtocol,
    apply_environment,
    run_benchmark,
)

log = logging.getLogger(__name__)

OUTPUT_FORMATS = ("markdown", "csv", "json", "boxplot")
OUTPUT_SUFFIXES = {"markdown": ".md", "csv": ".csv", "json": ".json", "boxplot": ".boxplot.json"}
VARIANT_PREFIX = "variant:"
PRESETS = ("startup", "mtree", "deargon")
SECTION_KEYS = {
    "suite": {"title", "name", "outputs", "output_dir"},
    "protocol": {"warmups", "iterations", "prepare", "high_priority", "cpu_set",
                 "use_shell", "tolerate_failures"},
}


class ConfigError(ValueError):
    pass


class SuiteAborted(RuntimeError):
    """A variant failed mid-suite; ``partial`` holds what was measured before it."""

    def __init__(self, cause: MeasurementError, partial: rep.ComparisonReport,
                 dump_path: Path | None):
        self.cause = cause
        self.partial = partial
        self.dump_path = dump_path
        where = f"; partial results in {dump_path}" if dump_path else ""
        super().__init__(f"{cause}{where}")


@dataclass
class SuiteConfig:
    protocol: MeasurementProtocol
    variants: list[ExecutionVariant]
    outputs: tuple[str, ...] = ("markdown",)
    output_dir: Path = Path(".")
    title: str = ""
    name: str = "report"

    def __post_init__(self):
        if not self.variants:
            raise ConfigError("suite has no variants")
        seen = set()
        for v in self.variants:
            if v.name in seen:
                raise ConfigError(f"duplicate variant name {v.name!r}")
            seen.add(v.name)
        if not self.outputs:
            raise ConfigError("at least one output format is required")
        unknown = set(self.outputs) - set(OUTPUT_FORMATS)
        if unknown:
            raise ConfigError(f"unknown output format(s): {', '.join(sorted(unknown))}")
        self.output_dir = Path(self.output_dir)


def parse_cpu_set(text: str) -> frozenset[int]:
    """Parse a taskset-style CPU list such as ``0,2,24-47``."""
    cpus = set()
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            if sep:
                a, b = int(lo), int(hi)
                if a > b:
                    raise ValueError
                cpus.update(range(a, b + 1))
            else:
                cpus.add(int(lo))
        except ValueError:
            raise ConfigError(f"bad cpu list entry {part!r}") from None
    if not cpus:
        raise ConfigError("cpu_set is empty")
    return frozenset(cpus)


def _parse_env(text: str, where: str) -> dict[str, str]:
    env = {}
    for token in shlex.split(text):
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ConfigError(f"{where}: env entry {token!r} is not KEY=VALUE")
        env[key] = value
    return env


def _get_int(section, key, default, where):
    try:
        return section.getint(key, default)
    except ValueError:
        raise ConfigError(f"{where}: {key} must be an integer, got {section.get(key)!r}") from None


def _get_bool(section, key, default, where):
    try:
        return section.getboolean(key, default)
    except ValueError:
        raise ConfigError(f"{where}: {key} must be a boolean, got {section.get(key)!r}") from None


def parse_config(text: str, source: str = "<config>", base_dir: Path | None = None) -> SuiteConfig:
    cp = configparser.ConfigParser(interpolation=None, strict=True,
                                   default_section="__defaults__")
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.DuplicateSectionError as exc:
        name = exc.section
        if name.lower().startswith(VARIANT_PREFIX):
            name = name[len(VARIANT_PREFIX):].strip()
            raise ConfigError(f"{source} line {exc.lineno}: duplicate variant name {name!r}") from None
        raise ConfigError(f"{source} line {exc.lineno}: duplicate section [{exc.section}]") from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"{source} line {exc.lineno}: duplicate key {exc.option!r} "
                          f"in [{exc.section}]") from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"{source} line {exc.lineno}: expected a [section] header") from None
    except configparser.ParsingError as exc:
        lines = ", ".join(str(n) for n, _ in exc.errors)
        raise ConfigError(f"{source} line {lines}: cannot parse") from None
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    for section_name, allowed in SECTION_KEYS.items():
        if cp.has_section(section_name):
            unknown = set(cp[section_name]) - allowed
            if unknown:
                raise ConfigError(f"{source} [{section_name}]: unknown key(s) "
                                  f"{', '.join(sorted(unknown))}")

    suite = cp["suite"] if cp.has_section("suite") else cp[cp.default_section]
    where = f"{source} [suite]"
    outputs = tuple(suite.get("outputs", "markdown").replace(",", " ").split())
    output_dir = Path(suite.get("output_dir", "."))
    if base_dir is not None and not output_dir.is_absolute():
        output_dir = base_dir / output_dir

    prot = cp["protocol"] if cp.has_section("protocol") else cp[cp.default_section]
    where = f"{source} [protocol]"
    iterations = _get_int(prot, "iterations", 10, where)
    warmups = _get_int(prot, "warmups", 0, where)
    if iterations < 1:
        raise ConfigError(f"{where}: iterations must be >= 1, got {iterations}")
    if warmups < 0:
        raise ConfigError(f"{where}: warmups must be >= 0, got {warmups}")
    prepare = prot.get("prepare", "").strip()
    cpu_text = prot.get("cpu_set", "").strip()
    protocol = MeasurementProtocol(
        warmups=warmups,
        iterations=iterations,
        prepare=("/bin/sh", "-c", prepare) if prepare else None,
        high_priority=_get_bool(prot, "high_priority", False, where),
        cpu_set=parse_cpu_set(cpu_text) if cpu_text else None,
        use_shell=_get_bool(prot, "use_shell", False, where),
        tolerate_failures=_get_bool(prot, "tolerate_failures", False, where),
    )

    variants = []
    for section_name in cp.sections():
        if section_name in ("suite", "protocol"):
            continue
        if not section_name.lower().startswith(VARIANT_PREFIX):
            raise ConfigError(f"{source}: unknown section [{section_name}]")
        name = section_name[len(VARIANT_PREFIX):].strip()
        where = f"{source} [{section_name}]"
        sec = cp[section_name]
        unknown = set(sec) - {"command", "workdir", "env"} - set(cp.defaults())
        if unknown:
            raise ConfigError(f"{where}: unknown key(s) {', '.join(sorted(unknown))}")
        command = sec.get("command", "").strip()
        if not command:
            raise ConfigError(f"{where}: missing 'command'")
        try:
            argv = [command] if protocol.use_shell else shlex.split(command)
        except ValueError as exc:
            raise ConfigError(f"{where}: cannot split command: {exc}") from None
        if any(v.name == name for v in variants):
            raise ConfigError(f"{where}: duplicate variant name {name!r}")
        workdir = sec.get("workdir")
        if workdir and base_dir is not None and not os.path.isabs(workdir):
            workdir = str(base_dir / workdir)
        try:
            variants.append(ExecutionVariant(name, argv, workdir or None,
                                             _parse_env(sec.get("env", ""), where)))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None

    try:
        return SuiteConfig(protocol, variants, outputs, output_dir,
                           title=suite.get("title", "").strip(),
                           name=suite.get("name", "report").strip() or "report")
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path) -> SuiteConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return parse_config(text, source=str(path), base_dir=path.parent)


def preset_text(name: str = "startup") -> str:
    """Contents of a shipped preset suite (``startup``, ``mtree`` or ``deargon``)."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files("runbench.presets").joinpath(f"{name}.ini").read_text()


def load_preset(name: str = "startup") -> SuiteConfig:
    return parse_config(preset_text(name), source=f"preset:{name}")


def _resolve(variant: ExecutionVariant, use_shell: bool) -> str | None:
    """Return an error message if the variant's program cannot be found."""
    if use_shell:
        return None if os.access("/bin/sh", os.X_OK) else "/bin/sh is not executable"
    prog = variant.argv[0]
    if os.sep in prog:
        path = Path(prog)
        if not path.is_absolute() and variant.workdir:
            path = Path(variant.workdir) / path
        if path.is_file() and os.access(path, os.X_OK):
            return None
        return f"{prog!r} is not an executable file"
    search_path = variant.env.get("PATH") if variant.env else None
    if shutil.which(prog, path=search_path) is None:
        return f"{prog!r} not found on PATH"
    return None


def check_variants(config: SuiteConfig) -> None:
    """Fail fast on any variant whose program does not resolve."""
    problems = []
    for v in config.variants:
        msg = _resolve(v, config.protocol.use_shell)
        if msg is None and v.workdir and not Path(v.workdir).is_dir():
            msg = f"workdir {v.workdir!r} does not exist"
        if msg:
            problems.append(f"variant {v.name!r}: {msg}")
    if problems:
        raise ConfigError("; ".join(problems))


def render(report: rep.ComparisonReport, fmt: str) -> str:
    if fmt == "markdown":
        return rep.to_markdown(report)
    if fmt == "csv":
        return rep.to_csv(report)
    if fmt == "json":
        return rep.to_json(report)
    if fmt == "boxplot":
        return rep.boxplot_json(report)
    raise ValueError(f"unknown output format {fmt!r}")


def write_outputs(report: rep.ComparisonReport, outputs, output_dir: Path,
                  name: str = "report") -> list[Path]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in outputs:
        path = output_dir / f"{name}{OUTPUT_SUFFIXES[fmt]}"
        path.write_text(render(report, fmt))
        written.append(path)
    return written


def run_suite(config: SuiteConfig, *, write: bool = True, progress=None) -> rep.ComparisonReport:
    """Measure every variant in order and emit the configured outputs.

    All programs are resolved before anything is timed. If a variant fails
    in strict mode the suite stops and whatever was already measured is
    dumped as ``<name>.partial.json`` before :class:`SuiteAborted` is raised.
    """
    check_variants(config)
    env_report = apply_environment(config.protocol)
    log.info("environment: %s", env_report)

    done = []
    for i, variant in enumerate(config.variants, 1):
        if progress:
            progress(f"[{i}/{len(config.variants)}] {variant.name}")
        try:
            done.append(run_benchmark(variant, config.protocol))
        except MeasurementError as exc:
            partial = rep.build_report(config.title, done)
            dump = None
            if write:
                config.output_dir.mkdir(parents=True, exist_ok=True)
                dump = config.output_dir / f"{config.name}.partial.json"
                dump.write_text(rep.to_json(partial))
            raise SuiteAborted(exc, partial, dump) from exc

    report = rep.build_report(config.title, done)
    if write:
        write_outputs(report, config.outputs, config.output_dir, config.name)
    return report


def replay(path) -> rep.ComparisonReport:
    """Rebuild a report from a JSON export without running anything."""
    return rep.from_json(Path(path).read_text())


def with_overrides(config: SuiteConfig, **protocol_overrides) -> SuiteConfig:
    """Copy of ``config`` with protocol fields replaced; ``None`` values are ignored."""
    changes = {k: v for k, v in protocol_overrides.items() if v is not None}
    if not changes:
        return config
    try:
        protocol = replace(config.protocol, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return replace(config, protocol=protocol)
