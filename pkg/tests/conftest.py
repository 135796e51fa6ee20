import os

import pytest


@pytest.fixture(scope="session")
def count_cache(tmp_path_factory):
    """One point-count cache shared by every test in the session."""
    d = os.environ.get("ELLSURF_TEST_CACHE")
    if d:
        return d
    return str(tmp_path_factory.mktemp("counts"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
