import json
import sys
from pathlib import Path

import pytest

from runbench import suite
from runbench.measure import ExecutionVariant, MeasurementProtocol
from runbench.suite import ConfigError, SuiteAborted, SuiteConfig, load_config, parse_config, run_suite

from conftest import PY, module_variant, py_variant, sleep_variant

PAPER_MATRIX = [
    "Podman x86-musl", "Podman x86-gnu", "Podman WasmEdge", "Podman Wasmtime",
    "Native x86-musl", "Native x86-gnu", "WasmEdge", "WasmEdge opt.", "Wasmtime", "Wasmtime opt.",
]


def test_minimal_config(data_dir):
    cfg = load_config(data_dir / "minimal.ini")
    assert cfg.variants == [ExecutionVariant("echo", ["echo", "hello"])]
    assert cfg.protocol == MeasurementProtocol()
    assert cfg.outputs == ("markdown",)
    assert cfg.output_dir == data_dir


def test_full_config(data_dir):
    cfg = load_config(data_dir / "full.ini")
    assert cfg.title == "Benchmark results for Merkle Trees (mtree.rs)"
    assert cfg.name == "mtree"
    assert cfg.outputs == ("markdown", "csv", "json", "boxplot")
    assert cfg.output_dir == data_dir / "out"
    assert cfg.protocol == MeasurementProtocol(
        warmups=2, iterations=30, prepare=("/bin/sh", "-c", "sync; true"), high_priority=True,
        cpu_set=frozenset({0, 2, 4, 5, 6}))
    native, wasm = cfg.variants
    assert native == ExecutionVariant("Native x86-gnu", ["./mtree.libc", "18"], str(data_dir / "build"),
                                      {"RUST_LOG": "off", "GREETING": "hello world"})
    assert wasm.argv == ("wasmtime", "run", "--allow-precompiled", "./mtree one.cwasm", "18")


def test_shell_mode_keeps_command_whole():
    cfg = parse_config("[protocol]\nuse_shell = true\n[variant: s]\ncommand = echo a | wc -c\n")
    assert cfg.variants[0].argv == ("echo a | wc -c",)


def test_duplicate_variant_names():
    text = "[variant: dup]\ncommand = true\n[variant: other]\ncommand = true\n[variant: dup]\ncommand = false\n"
    with pytest.raises(ConfigError, match="line 5: duplicate variant name 'dup'"):
        parse_config(text)


@pytest.mark.parametrize("text, message", [
    ("[protocol]\niterations = 0\n[variant: a]\ncommand = true\n", "iterations must be >= 1"),
    ("[protocol]\niterations = many\n[variant: a]\ncommand = true\n", "iterations must be an integer"),
    ("[protocol]\nwarmups = -1\n[variant: a]\ncommand = true\n", "warmups must be >= 0"),
    ("[protocol]\nhigh_priority = maybe\n[variant: a]\ncommand = true\n", "high_priority must be a boolean"),
    ("[protocol]\ncpu_set = 3-1\n[variant: a]\ncommand = true\n", "bad cpu list entry"),
    ("[suite]\noutputs = pdf\n[variant: a]\ncommand = true\n", "unknown output format"),
    ("[suite]\ntitle = x\n", "no variants"),
    ("[variant: a]\nworkdir = /tmp\n", "missing 'command'"),
    ("[variant: a]\ncommand = 'unterminated\n", "cannot split command"),
    ("[variant: a]\ncommand = true\ncolour = red\n", "unknown key"),
    ("[variants: a]\ncommand = true\n", "unknown section"),
    ("[protocol]\niteration = 3\n[variant: a]\ncommand = true\n", "unknown key.*iteration"),
    ("[variant: a]\ncommand = true\nenv = NOEQUALS\n", "not KEY=VALUE"),
    ("[variant: a]\ncommand = true\ncommand = false\n", "line 3: duplicate key .command."),
    ("[variant: a]\ncommand = true\njunk line\n", "line 3: cannot parse"),
    ("command = true\n", "line 1"),
    ("[variant:  ]\ncommand = true\n", "name must be non-empty"),
])
def test_validation_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.ini")


def test_suite_config_rejects_empty_outputs():
    with pytest.raises(ConfigError):
        SuiteConfig(MeasurementProtocol(), [ExecutionVariant("a", ["true"])], outputs=())


def test_cpu_set_parsing():
    assert suite.parse_cpu_set("24-27") == frozenset({24, 25, 26, 27})
    assert suite.parse_cpu_set(" 1, 3 ") == frozenset({1, 3})
    with pytest.raises(ConfigError):
        suite.parse_cpu_set(",")


def test_startup_preset_matches_paper_matrix():
    cfg = suite.load_preset("startup")
    assert [v.name for v in cfg.variants] == PAPER_MATRIX
    assert cfg.protocol.warmups == 5 and cfg.protocol.iterations == 50
    assert cfg.protocol.high_priority and cfg.protocol.prepare
    assert cfg.protocol.cpu_set == frozenset(range(24, 48))
    by_name = {v.name: v.argv for v in cfg.variants}
    assert by_name["Wasmtime opt."][:3] == ("wasmtime", "run", "--allow-precompiled")
    assert "run.oci.handler=wasmedge" in by_name["Podman WasmEdge"]


def test_other_presets_parse():
    mtree = suite.load_preset("mtree")
    assert [v.name for v in mtree.variants] == PAPER_MATRIX
    assert all(v.argv[-1] == "18" for v in mtree.variants)
    crypto = suite.load_preset("deargon")
    assert "WasmEdge" not in [v.name for v in crypto.variants]
    assert len(crypto.variants) == 8
    assert crypto.protocol.warmups == 2 and crypto.protocol.iterations == 50


def test_unknown_preset():
    with pytest.raises(ConfigError):
        suite.preset_text("fib")


def _config(variants, tmp_path, **protocol):
    protocol.setdefault("iterations", 3)
    return SuiteConfig(MeasurementProtocol(**protocol), variants,
                       outputs=("markdown", "csv", "json", "boxplot"), output_dir=tmp_path, name="r")


def test_two_sleeps_relative_factor(tmp_path):
    cfg = _config([sleep_variant("slow", 0.3), sleep_variant("fast", 0.1)], tmp_path)
    report = run_suite(cfg)
    assert [r.variant_name for r in report.rows] == ["fast", "slow"]
    assert report.rows[1].relative == pytest.approx(3.0, rel=0.3)
    assert list(report.samples) == ["slow", "fast"]
    for suffix in (".md", ".csv", ".json", ".boxplot.json"):
        assert (tmp_path / f"r{suffix}").exists()


def test_single_variant_suite(tmp_path):
    report = run_suite(_config([ExecutionVariant("echo", ["echo"])], tmp_path))
    assert len(report.rows) == 1 and report.rows[0].relative == 1.0
    assert "| 1.00 |" in (tmp_path / "r.md").read_text()


def test_unresolvable_program_fails_before_timing(tmp_path):
    log = tmp_path / "ran"
    variants = [
        ExecutionVariant("first", ["/bin/sh", "-c", f"echo x >> {log}"]),
        ExecutionVariant("second", ["true"]),
        ExecutionVariant("third", ["definitely-not-a-program-xyz"]),
    ]
    with pytest.raises(ConfigError, match="'third'"):
        run_suite(_config(variants, tmp_path))
    assert not log.exists()


def test_relative_path_resolves_against_workdir(tmp_path):
    script = tmp_path / "bin" / "probe"
    script.parent.mkdir()
    script.write_text("#!/bin/sh\nexit 0\n")
    script.chmod(0o755)
    v = ExecutionVariant("probe", ["./probe"], workdir=str(script.parent))
    suite.check_variants(_config([v], tmp_path))
    with pytest.raises(ConfigError):
        suite.check_variants(_config([ExecutionVariant("probe", ["./probe"])], tmp_path))


def test_failure_dumps_partial_results(tmp_path):
    variants = [ExecutionVariant("ok", ["true"]), py_variant("boom", "raise SystemExit(4)"),
                ExecutionVariant("never", ["true"])]
    with pytest.raises(SuiteAborted) as info:
        run_suite(_config(variants, tmp_path))
    assert info.value.cause.exit_code == 4
    partial = json.loads((tmp_path / "r.partial.json").read_text())
    assert partial["variants"] == ["ok"]
    assert not (tmp_path / "r.md").exists()


def test_replay_reproduces_live_markdown(tmp_path):
    cfg = _config([ExecutionVariant("a", ["true"]), ExecutionVariant("b", ["echo", "b"])], tmp_path)
    live = run_suite(cfg)
    replayed = suite.replay(tmp_path / "r.json")
    assert (tmp_path / "r.md").read_text() == suite.render(replayed, "markdown")
    assert replayed.rows == live.rows


def test_with_overrides():
    cfg = SuiteConfig(MeasurementProtocol(), [ExecutionVariant("a", ["true"])])
    new = suite.with_overrides(cfg, iterations=7, warmups=None)
    assert new.protocol.iterations == 7 and new.protocol.warmups == 0
    with pytest.raises(ConfigError):
        suite.with_overrides(cfg, iterations=0)
