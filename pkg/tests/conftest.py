import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# (number, title, PASS/FAIL, elapsed seconds, budget seconds or None, tolerance)
ACCEPTANCE_RESULTS: list[tuple[int, str, str, float, float | None, str]] = []


@contextmanager
def _record(number: int, title: str, budget: float | None, tolerance: str):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS.append((number, title, "FAIL", time.perf_counter() - t0, budget, tolerance))
        raise
    elapsed = time.perf_counter() - t0
    status = "PASS" if budget is None or elapsed < budget else "FAIL"
    ACCEPTANCE_RESULTS.append((number, title, status, elapsed, budget, tolerance))
    if status == "FAIL":
        pytest.fail(f"criterion {number} took {elapsed:.1f}s, budget {budget:.0f}s")


@pytest.fixture
def criterion():
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, elapsed, budget, tol in sorted(ACCEPTANCE_RESULTS):
        limit = f"< {budget:.0f}s" if budget is not None else "no limit"
        terminalreporter.write_line(f"{status} criterion {number}: {title} [{elapsed:.2f}s, {limit}; tolerance {tol}]")
