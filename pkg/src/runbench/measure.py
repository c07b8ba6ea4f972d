"""Wall-clock measurement of external commands.

A command is run as a child process with its output captured in memory.
Elapsed time is taken from a monotonic clock, from just before the spawn
until the child's exit status has been collected.
"""

from __future__ import annotations

import logging
import os
import subprocess
import sys
import time
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

log = logging.getLogger(__name__)


class MeasurementError(RuntimeError):
    """Base class for failures while measuring a variant."""


class SpawnError(MeasurementError):
    def __init__(self, variant: str, argv: Sequence[str], cause: OSError):
        self.variant = variant
        self.argv = list(argv)
        self.cause = cause
        super().__init__(f"variant {variant!r}: cannot execute {argv[0]!r}: {cause.strerror or cause}")


class PrepareError(MeasurementError):
    def __init__(self, variant: str, exit_code: int, output: bytes = b""):
        self.variant = variant
        self.exit_code = exit_code
        self.output = output
        super().__init__(f"variant {variant!r}: prepare command exited with code {exit_code}")


class CommandFailed(MeasurementError):
    """The measured command returned a non-zero exit code.

    ``iteration`` counts timed iterations from 0; a failure during warmup
    carries ``warmup=True``.
    """

    def __init__(self, variant: str, iteration: int, exit_code: int, *, warmup: bool = False,
                 output: bytes = b""):
        self.variant = variant
        self.iteration = iteration
        self.exit_code = exit_code
        self.warmup = warmup
        self.output = output
        phase = "warmup" if warmup else "iteration"
        super().__init__(f"variant {variant!r}: {phase} {iteration} exited with code {exit_code}")


@dataclass(frozen=True)
class ExecutionVariant:
    """One named way of running a workload, e.g. ``Native x86-musl``."""

    name: str
    argv: tuple[str, ...]
    workdir: str | None = None
    env: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "argv", tuple(self.argv))
        object.__setattr__(self, "env", dict(self.env))
        if not self.name:
            raise ValueError("variant name must be non-empty")
        if not self.argv or not self.argv[0]:
            raise ValueError(f"variant {self.name!r}: argv must be non-empty")


@dataclass(frozen=True)
class MeasurementProtocol:
    """How each variant is sampled.

    ``prepare`` is an argv run before every warmup and timed iteration
    (typically a cache flush). ``use_shell`` runs the measured command
    through ``/bin/sh -c`` with its tokens joined by single spaces.
    """

    warmups: int = 0
    iterations: int = 10
    prepare: tuple[str, ...] | None = None
    high_priority: bool = False
    cpu_set: frozenset[int] | None = None
    use_shell: bool = False
    tolerate_failures: bool = False
    show_output: bool = False

    def __post_init__(self):
        if self.prepare is not None:
            object.__setattr__(self, "prepare", tuple(self.prepare))
            if not self.prepare:
                raise ValueError("prepare command must be non-empty when given")
        if self.cpu_set is not None:
            object.__setattr__(self, "cpu_set", frozenset(self.cpu_set))
            if not self.cpu_set:
                raise ValueError("cpu_set must be non-empty when given")
            if min(self.cpu_set) < 0:
                raise ValueError("cpu_set indices must be non-negative")
        if self.warmups < 0:
            raise ValueError(f"warmups must be >= 0, got {self.warmups}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass
class SampleSet:
    variant_name: str
    samples: list[float] = field(default_factory=list)
    exit_codes: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.samples)


class Timing(NamedTuple):
    duration: float
    exit_code: int
    output: bytes


def _command_argv(variant: ExecutionVariant, protocol: MeasurementProtocol) -> list[str]:
    if protocol.use_shell:
        return ["/bin/sh", "-c", " ".join(variant.argv)]
    return list(variant.argv)


def _child_env(variant: ExecutionVariant) -> dict[str, str] | None:
    if not variant.env:
        return None
    env = dict(os.environ)
    env.update(variant.env)
    return env


def run_once(variant: ExecutionVariant, protocol: MeasurementProtocol) -> Timing:
    """Spawn the variant once and return its elapsed time and exit code.

    stdout and stderr are merged into one captured buffer so terminal
    speed never enters the measurement.
    """
    argv = _command_argv(variant, protocol)
    env = _child_env(variant)
    start = time.perf_counter_ns()
    try:
        proc = subprocess.Popen(argv, cwd=variant.workdir, env=env,
                                stdin=subprocess.DEVNULL, stdout=subprocess.PIPE,
                                stderr=subprocess.STDOUT)
    except OSError as exc:
        raise SpawnError(variant.name, argv, exc) from exc
    output, _ = proc.communicate()
    elapsed = time.perf_counter_ns() - start
    return Timing(elapsed / 1e9, proc.returncode, output)


def _run_prepare(variant: ExecutionVariant, protocol: MeasurementProtocol) -> None:
    try:
        proc = subprocess.run(protocol.prepare, cwd=variant.workdir, env=_child_env(variant),
                              stdin=subprocess.DEVNULL, stdout=subprocess.PIPE,
                              stderr=subprocess.STDOUT)
    except OSError as exc:
        raise SpawnError(variant.name, protocol.prepare, exc) from exc
    if proc.returncode != 0:
        raise PrepareError(variant.name, proc.returncode, proc.stdout)


def _dump(variant: ExecutionVariant, output: bytes) -> None:
    if output:
        sys.stderr.write(f"--- {variant.name} ---\n")
        sys.stderr.write(output.decode(errors="replace"))
        sys.stderr.flush()


def run_benchmark(variant: ExecutionVariant, protocol: MeasurementProtocol) -> SampleSet:
    """Run warmups, then timed iterations, and return the timed samples.

    The prepare hook runs before every iteration, warmups included. In
    strict mode the first non-zero exit raises :class:`CommandFailed`;
    with ``protocol.tolerate_failures`` the exit code is recorded and
    sampling continues.
    """
    for i in range(protocol.warmups):
        if protocol.prepare:
            _run_prepare(variant, protocol)
        t = run_once(variant, protocol)
        if protocol.show_output:
            _dump(variant, t.output)
        if t.exit_code != 0 and not protocol.tolerate_failures:
            raise CommandFailed(variant.name, i, t.exit_code, warmup=True, output=t.output)

    result = SampleSet(variant.name)
    for i in range(protocol.iterations):
        if protocol.prepare:
            _run_prepare(variant, protocol)
        t = run_once(variant, protocol)
        if protocol.show_output:
            _dump(variant, t.output)
        if t.exit_code != 0 and not protocol.tolerate_failures:
            raise CommandFailed(variant.name, i, t.exit_code, output=t.output)
        result.samples.append(t.duration)
        result.exit_codes.append(t.exit_code)
    return result


@dataclass
class EnvironmentReport:
    """Outcome of :func:`apply_environment`.

    Each control is one of ``"not requested"``, ``"applied"`` or
    ``"degraded"``; ``notes`` explains any degradation.
    """

    priority: str = "not requested"
    affinity: str = "not requested"
    notes: list[str] = field(default_factory=list)

    @property
    def requested(self) -> bool:
        return self.priority != "not requested" or self.affinity != "not requested"

    @property
    def degraded(self) -> bool:
        return "degraded" in (self.priority, self.affinity)

    def __str__(self):
        if not self.requested:
            return "no controls requested"
        parts = [f"priority: {self.priority}", f"affinity: {self.affinity}"]
        return "; ".join(parts + self.notes)


HIGH_PRIORITY_NICE = -10


def apply_environment(protocol: MeasurementProtocol) -> EnvironmentReport:
    """Raise scheduling priority and pin to ``protocol.cpu_set``, best effort.

    Both settings apply to the current process and are inherited by every
    child spawned afterwards. Failures are logged and reported, never raised.
    """
    report = EnvironmentReport()

    if protocol.high_priority:
        try:
            os.setpriority(os.PRIO_PROCESS, 0, HIGH_PRIORITY_NICE)
            report.priority = "applied"
        except (OSError, AttributeError) as exc:
            report.priority = "degraded"
            report.notes.append(f"priority unavailable ({exc})")

    if protocol.cpu_set is not None:
        try:
            os.sched_setaffinity(0, protocol.cpu_set)
            report.affinity = "applied"
        except (OSError, AttributeError) as exc:
            report.affinity = "degraded"
            report.notes.append(f"affinity unavailable ({exc})")

    if report.degraded:
        log.warning("environment controls degraded: %s", report)
    return report
