from collections import defaultdict

import pytest

_CRITERIA: dict[int, list[bool]] = defaultdict(list)
_TITLES = {
    1: "exact rational law",
    2: "equidistribution at golden",
    3: "discontinuity gap at rational fibers",
    4: "continuity along golden convergents",
    5: "invariance under the skew map",
    6: "homeomorphism plumbing",
    7: "periodic averages and convergent growth",
    8: "partition discrepancy",
    9: "Thomae continuity probe",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[mark.args[0]].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"{status} criterion {n}: {_TITLES.get(n, '')} ({sum(results)}/{len(results)} checks)")
