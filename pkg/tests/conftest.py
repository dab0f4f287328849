"""Collects the outcome of every ``@pytest.mark.criterion(n, title)`` test and
prints one PASS/FAIL line per criterion at the end of the run."""

import pytest

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture(autouse=True)
def _record_criterion(request):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        request.node.user_properties.append(("criterion", tuple(marker.args)))
    yield


def pytest_runtest_logreport(report):
    info = dict(report.user_properties).get("criterion")
    if info is None:
        return
    number, title = info
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, outcome = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {outcome}: {title}")
