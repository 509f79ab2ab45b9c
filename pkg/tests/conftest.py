"""Shared pytest wiring: summary lines for the acceptance criteria.

Tests named test_criterion_<n>_* (in tests/test_acceptance.py) get one
"criterion n: PASS/FAIL - <first docstring line>" line in a dedicated
section of the terminal summary, so the acceptance gate is readable at a
glance even inside a long run.
"""

from __future__ import annotations

import re

_CRITERION = re.compile(r"test_criterion_(\d+)")

_descriptions: dict[int, str] = {}
_outcomes: dict[int, str] = {}


def pytest_collection_modifyitems(items) -> None:
    for item in items:
        match = _CRITERION.search(item.name)
        if match is None:
            continue
        doc = getattr(item.function, "__doc__", None) or ""
        first_line = doc.strip().splitlines()[0] if doc.strip() else item.name
        _descriptions[int(match.group(1))] = first_line


def pytest_runtest_logreport(report) -> None:
    match = _CRITERION.search(report.nodeid)
    if match is None:
        return
    number = int(match.group(1))
    if report.when == "call":
        _outcomes[number] = "PASS" if report.passed else "FAIL"
    elif report.failed:
        # setup/teardown error counts as a failed criterion
        _outcomes[number] = "FAIL"


def pytest_terminal_summary(terminalreporter) -> None:
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        description = _descriptions.get(number, "")
        terminalreporter.write_line(
            f"criterion {number}: {_outcomes[number]} - {description}"
        )
