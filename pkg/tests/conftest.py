import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[str, str] = {}
_outcomes: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        for mark in item.iter_markers("acceptance"):
            if "criterion" in mark.kwargs:
                _criteria[item.nodeid] = mark.kwargs["criterion"]


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call" or report.failed:
        if _outcomes.get(report.nodeid) != "FAIL":
            _outcomes[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, label in _criteria.items():
        if nodeid in _outcomes:
            terminalreporter.write_line(f"[{_outcomes[nodeid]}] {label}")
