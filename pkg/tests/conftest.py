import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test decides")


def pytest_runtest_logreport(report):
    label = getattr(report, "criterion", None)
    if label is None:
        return
    entry = _criteria.setdefault(label, [True, report.nodeid])
    if report.failed:
        entry[0] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep.criterion = marker.args[0]


def _order(label: str):
    m = re.match(r"(\d+)(\w*)", label)
    return (int(m.group(1)), m.group(2)) if m else (10**6, label)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=_order):
        ok, nodeid = _criteria[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
