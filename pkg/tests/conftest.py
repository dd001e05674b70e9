"""Shared fixtures and the PASS/FAIL summary for the acceptance suite."""

from __future__ import annotations

import pytest

from lmrdcodes.gf import field_new

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def f2():
    return field_new(2)


@pytest.fixture(scope="session")
def f3():
    return field_new(3)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
