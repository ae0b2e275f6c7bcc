from __future__ import annotations

import pytest

_RESULTS: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    label = _LABELS.get(report.nodeid)
    if label is None:
        return
    status = "PASS" if report.outcome == "passed" else "FAIL"
    _RESULTS[report.nodeid] = (label, status)


_LABELS: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _LABELS[item.nodeid] = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in sorted(_RESULTS.values(), key=lambda r: int(r[0].split()[0][1:])):
        terminalreporter.write_line(f"{status}  {label}")


@pytest.fixture
def note(request):
    """Attach a line of evidence to the test report."""
    def add(text: str) -> None:
        request.node.user_properties.append(("evidence", text))
        print(text)
    return add
