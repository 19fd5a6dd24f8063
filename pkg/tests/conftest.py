"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import re

import pytest
from hypothesis import settings

# First calls trigger numba compilation, which can exceed any per-example deadline.
settings.register_profile("default", deadline=None)
settings.load_profile("default")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion checked by the test")
    config._criterion_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, text = marker.args
        detail = dict(item.user_properties).get("detail", "")
        item.config._criterion_results.append((number, text, report.outcome, detail))


def _order(result):
    number, suffix = re.match(r"(\d+)(.*)", str(result[0])).groups()
    return int(number), suffix


def pytest_terminal_summary(terminalreporter, config):
    results = config._criterion_results
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, outcome, detail in sorted(results, key=_order):
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] C{number}: {text}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
