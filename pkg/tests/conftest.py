import os
import shutil
import sys
from pathlib import Path

import pytest

from runbench.measure import ExecutionVariant

DATA = Path(__file__).parent / "data"
PY = sys.executable


def py_variant(name, code, **kw):
    return ExecutionVariant(name, [PY, "-c", code], **kw)


def module_variant(name, module, *args):
    return ExecutionVariant(name, [PY, "-m", module, *map(str, args)])


def sleep_variant(name, seconds):
    sleep = shutil.which("sleep")
    if sleep:
        return ExecutionVariant(name, [sleep, str(seconds)])
    return py_variant(name, f"import time; time.sleep({seconds})")


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def restore_scheduling():
    """Undo affinity and niceness changes made by apply_environment."""
    affinity = os.sched_getaffinity(0)
    nice = os.getpriority(os.PRIO_PROCESS, 0)
    yield
    os.sched_setaffinity(0, affinity)
    try:
        os.setpriority(os.PRIO_PROCESS, 0, nice)
    except PermissionError:
        pass


# acceptance criteria: one summary line per criterion at the end of the run
_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    marker = _criteria_marker.get(report.nodeid)
    if marker is None:
        return
    number, title = marker
    outcome = _criteria.get(number, (title, "PASS"))[1]
    if report.failed:
        outcome = "FAIL"
    elif report.skipped and outcome == "PASS" and report.when in ("setup", "call"):
        outcome = "SKIP"
    _criteria[number] = (title, outcome)


_criteria_marker = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria_marker[item.nodeid] = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcome = _criteria[number]
        terminalreporter.write_line(f"[{outcome}] criterion {number:2d}: {title}")
