"""Shared pytest wiring for the acceptance suite.

Each acceptance test wraps its body in the ``criterion`` fixture, which
records one PASS/FAIL line (with wall time) per criterion and enforces the
runtime budget where one applies.  The terminal-summary hook replays the
recorded lines after the run, outside capture, so the verdicts are visible
no matter how pytest was invoked.
"""

import time
from contextlib import contextmanager

import pytest

_verdicts = []


@pytest.fixture
def criterion():
    @contextmanager
    def run(number, title, budget=None):
        t0 = time.perf_counter()
        failed = False
        try:
            yield
        except BaseException:
            failed = True
            raise
        finally:
            elapsed = time.perf_counter() - t0
            over = budget is not None and elapsed > budget
            verdict = "FAIL" if (failed or over) else "PASS"
            _verdicts.append(f"[{number:02d}] {title}: {verdict} ({elapsed:.2f} s)")
        if over:
            raise AssertionError(f"runtime {elapsed:.2f} s exceeds the {budget:.0f} s budget")

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for line in _verdicts:
        terminalreporter.write_line(line)
