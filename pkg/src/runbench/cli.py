"""Command line entry point: ``runbench run | replay | presets``.

Exit codes: 0 on success, 1 on configuration/validation errors, 2 when a
measured command (or its prepare hook) fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import suite
from .measure import MeasurementError
from .report import to_markdown

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2


def _outputs(values):
    if not values:
        return None
    formats = []
    for v in values:
        formats.extend(x for x in v.replace(",", " ").split() if x)
    return tuple(dict.fromkeys(formats))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="runbench", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="measure every variant of a suite file")
    run.add_argument("config", type=Path)
    run.add_argument("-r", "--iterations", type=int, help="timed iterations per variant")
    run.add_argument("-w", "--warmups", type=int, help="untimed warmup runs per variant")
    run.add_argument("-p", "--prepare", help="shell command run before every iteration")
    run.add_argument("-o", "--output", action="append", metavar="FORMATS",
                     help=f"output formats ({', '.join(suite.OUTPUT_FORMATS)}); repeatable")
    run.add_argument("-d", "--output-dir", type=Path)
    run.add_argument("-i", "--tolerate-failures", action="store_true", default=None,
                     help="record non-zero exit codes instead of aborting")
    run.add_argument("--show-output", action="store_true", default=None,
                     help="dump captured child output to stderr")

    rep = sub.add_parser("replay", help="regenerate reports from a JSON export")
    rep.add_argument("json", type=Path)
    rep.add_argument("-o", "--output", action="append", metavar="FORMATS")
    rep.add_argument("-d", "--output-dir", type=Path)
    rep.add_argument("-n", "--name", default=None, help="file stem for written outputs")

    pre = sub.add_parser("presets", help="print a shipped suite file")
    pre.add_argument("name", nargs="?", default="startup", choices=suite.PRESETS)
    pre.add_argument("-l", "--list", action="store_true", help="list preset names")
    return parser


def _cmd_run(args) -> int:
    try:
        config = suite.load_config(args.config)
        config = suite.with_overrides(
            config,
            iterations=args.iterations,
            warmups=args.warmups,
            prepare=("/bin/sh", "-c", args.prepare) if args.prepare else None,
            tolerate_failures=args.tolerate_failures,
            show_output=args.show_output,
        )
        outputs = _outputs(args.output)
        if outputs or args.output_dir:
            config = suite.SuiteConfig(config.protocol, config.variants,
                                       outputs or config.outputs,
                                       args.output_dir or config.output_dir,
                                       config.title, config.name)
    except (suite.ConfigError, ValueError) as exc:
        print(f"runbench: {exc}", file=sys.stderr)
        return EXIT_INVALID

    def progress(msg):
        print(msg, file=sys.stderr)

    try:
        report = suite.run_suite(config, progress=progress)
    except suite.ConfigError as exc:
        print(f"runbench: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except suite.SuiteAborted as exc:
        print(f"runbench: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except MeasurementError as exc:
        print(f"runbench: {exc}", file=sys.stderr)
        return EXIT_FAILED
    sys.stdout.write(to_markdown(report))
    return EXIT_OK


def _cmd_replay(args) -> int:
    try:
        report = suite.replay(args.json)
        outputs = _outputs(args.output)
        if outputs:
            unknown = set(outputs) - set(suite.OUTPUT_FORMATS)
            if unknown:
                raise ValueError(f"unknown output format(s): {', '.join(sorted(unknown))}")
    except (OSError, ValueError, KeyError) as exc:
        print(f"runbench: cannot replay {args.json}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output_dir:
        name = args.name or args.json.name.split(".")[0]
        suite.write_outputs(report, outputs or ("markdown",), args.output_dir, name)
    if outputs and not args.output_dir:
        for fmt in outputs:
            sys.stdout.write(suite.render(report, fmt))
    elif not args.output_dir:
        sys.stdout.write(to_markdown(report))
    return EXIT_OK


def _cmd_presets(args) -> int:
    if args.list:
        print("\n".join(suite.PRESETS))
    else:
        sys.stdout.write(suite.preset_text(args.name))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; keep 2 reserved for command failures
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "replay": _cmd_replay, "presets": _cmd_presets}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
