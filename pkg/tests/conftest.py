from __future__ import annotations

import pytest

from chronoslice.ingest import load_enron, load_primary_school

_VERDICTS: list = []


def record_verdict(label: str, ok: bool, detail: str) -> None:
    _VERDICTS.append((label, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _VERDICTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")


@pytest.fixture(scope="session")
def primary_school():
    return load_primary_school()


@pytest.fixture(scope="session")
def enron():
    """Raises FileNotFoundError when the per-day Enron CSV is not installed."""
    try:
        return load_enron()
    except FileNotFoundError as exc:
        return exc
