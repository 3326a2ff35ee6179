import pytest

from dfheight.corpus import get_series


@pytest.fixture
def series():
    """Fresh corpus series by name (caches are per instance)."""
    return get_series


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
