import pytest

from inspiremine.corpus import Comment, Post

# nodeid -> criterion label, in collection order
_criteria: dict[str, str] = {}
# nodeid -> pytest outcome string
_outcomes: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(label): top-level acceptance criterion"
    )


def pytest_collection_modifyitems(config, items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker:
            _criteria[item.nodeid] = marker.args[0]


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call":
        _outcomes[report.nodeid] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, label in _criteria.items():
        outcome = _outcomes.get(nodeid, "failed")
        word = {"passed": "PASS", "skipped": "SKIP"}.get(outcome, "FAIL")
        terminalreporter.write_line(f"{word}  {label}")


@pytest.fixture
def make_post():
    def factory(post_id, body="A plain body.", *, comments=(), **kwargs):
        comment_objs = [
            Comment(f"{post_id}-c{i}", text) for i, text in enumerate(comments)
        ]
        return Post(id=post_id, body=body, comments=comment_objs, **kwargs)

    return factory
