import os
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", deadline=None, max_examples=150)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


class Timed(dict):
    """A dict of results that remembers how long it took to build."""

    elapsed = 0.0


class TimedList(list):
    elapsed = 0.0


@pytest.fixture(scope="session")
def suite():
    """The eight extremal constants, computed once per session."""
    from rosenthal.extremal import constants_suite

    start = time.perf_counter()
    out = Timed((r.name, r) for r in constants_suite())
    out.elapsed = time.perf_counter() - start
    return out


@pytest.fixture(scope="session")
def table3_computed():
    from rosenthal.tables import table3_rows

    start = time.perf_counter()
    rows = TimedList(table3_rows())
    rows.elapsed = time.perf_counter() - start
    return rows


# One line per acceptance criterion, filled in by test_acceptance.py.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
