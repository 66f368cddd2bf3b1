import pytest

from collabrep.model import VersionHistory, VersionStats


def make_history(*stats, article="a1", community="c1", editors=None):
    """Build a history from (upvotes, downvotes[, views]) tuples."""
    versions = []
    for index, item in enumerate(stats):
        up, down, *rest = item
        views = rest[0] if rest else up + down
        editor = editors[index] if editors else f"e{index}"
        versions.append(VersionStats(index, editor, up, down, views))
    return VersionHistory(article, community, tuple(versions))


@pytest.fixture
def worked_history():
    # Engagement ratios 1/2, 11/20, 2/5, 9/50.
    return make_history((4, 1, 10), (9, 2, 20), (10, 6, 40), (15, 3, 100))


ACCEPTANCE_RESULTS = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_RESULTS.append((name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
