from __future__ import annotations

import time

import pytest

from tmfduality.ss_engine import Window, compute_homotopy, run_tate_ss

ACCEPTANCE_LINES: list[str] = []


class Criterion:
    """Times one acceptance criterion and records its PASS/FAIL line."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def finish(self, ok: bool, detail: str = "") -> None:
        elapsed = time.perf_counter() - self.start
        ok = ok and elapsed < self.limit
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {self.number:>2}: {self.title} ({elapsed:.2f}s, limit {self.limit:.0f}s)"
        if detail:
            line += f" -- {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line

    def __exit__(self, *exc):
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_window():
    return Window(12, -96, 96)


@pytest.fixture(scope="session")
def small_tate(small_window):
    return run_tate_ss(small_window)


@pytest.fixture(scope="session")
def small_hfpss(small_window, small_tate):
    return compute_homotopy("hfpss", small_window, small_tate)
