"""Collects acceptance verdicts and prints them once at the end of the run."""

import pytest

_VERDICTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_VERDICTS] = {}


@pytest.fixture
def criterion(request):
    """Call ``criterion(tag, ok, detail)``; a test that dies first is logged as FAIL."""
    log = request.config.stash[_VERDICTS]
    tag = request.node.name.split("_")[1].upper()
    log[tag] = (False, "did not complete")

    def record(ok: bool, detail: str = ""):
        log[tag] = (bool(ok), detail)
        print(f"{tag} {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_VERDICTS, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(log):
        ok, detail = log[tag]
        terminalreporter.write_line(f"{tag} {'PASS' if ok else 'FAIL'}  {detail}")
