import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def record(request):
    """Store an acceptance outcome so the terminal summary can list it."""
    results = request.config.stash[_RESULTS]

    def _record(number, title, passed, detail=""):
        results[number] = (title, bool(passed), detail)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed, detail = results[number]
        line = f"[{'PASS' if passed else 'FAIL'}] {number:2d} {title}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
