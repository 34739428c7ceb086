"""Shared fixtures and the acceptance summary printed after the run."""

from __future__ import annotations

import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str, elapsed: float, budget: float) -> str:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:>2}: {title} ({detail}; {elapsed:.2f} s, limit {budget:g} s)"
        _LINES[number] = line
        print(line)
        return line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        terminalreporter.write_line(_LINES[n])
