"""Shared pytest configuration.

Collects the outcome of every test in test_acceptance.py and prints one
PASS/FAIL line per acceptance criterion at the end of the run, so the
gate status is readable without scrolling the full log.
"""

import re

_ACCEPTANCE_FILE = "test_acceptance.py"
_CRITERION_RE = re.compile(r"test_c(\d{2})_(\w+)")

_outcomes: dict[str, bool] = {}


def pytest_runtest_logreport(report):
    if _ACCEPTANCE_FILE not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not _CRITERION_RE.match(name):
        return
    if report.when == "call":
        _outcomes[name] = report.passed
    elif report.failed:
        _outcomes[name] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_outcomes):
        match = _CRITERION_RE.match(name)
        number, slug = match.group(1), match.group(2)
        verdict = "PASS" if _outcomes[name] else "FAIL"
        terminalreporter.write_line(
            f"criterion {int(number):2d} {slug.replace('_', ' '):<42s} {verdict}"
        )
