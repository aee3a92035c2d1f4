"""Wall-clock budgets for the slow suites."""

from contextlib import contextmanager
import time


def coverage_active() -> bool:
    """True while coverage.py is measuring this process."""
    try:
        import coverage
    except ImportError:
        return False
    return coverage.Coverage.current() is not None


@contextmanager
def within_seconds(budget: float):
    """Assert the block finishes inside ``budget`` seconds.

    Budgets hold for untraced runs only (``pytest --no-cov``); under coverage the
    elapsed time is measured but not checked.
    """
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    if coverage_active():
        return
    assert elapsed < budget, f"took {elapsed:.2f}s, budget is {budget}s"
