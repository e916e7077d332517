from __future__ import annotations

import pytest

from gapcycles.cycle import census_of_stage

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def census13():
    return census_of_stage(13, 66)


@pytest.fixture(scope="session")
def census17():
    return census_of_stage(17, 66)


@pytest.fixture(scope="session")
def census19():
    return census_of_stage(19, 66)


@pytest.fixture(scope="session")
def census19_wide():
    return census_of_stage(19, 420)


@pytest.fixture(scope="session")
def acceptance():
    """Record one verdict per acceptance criterion for the terminal summary."""

    def record(number: int, passed: bool, detail: str) -> None:
        _ACCEPTANCE[number] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {detail}")
