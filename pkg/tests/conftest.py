import contextlib

import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive checks taking more than a few seconds")


@pytest.fixture
def criterion():
    """Record PASS/FAIL for one acceptance criterion; failures still raise."""

    @contextlib.contextmanager
    def record(number, title):
        try:
            yield
        except BaseException as exc:
            _criteria[number] = (title, "FAIL", str(exc).splitlines()[0] if str(exc) else type(exc).__name__)
            raise
        else:
            _criteria.setdefault(number, (title, "PASS", ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, detail = _criteria[number]
        line = f"criterion {number:2d} {status}: {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
