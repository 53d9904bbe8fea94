import functools

import pytest

from noncongruence.catalog import build


@functools.lru_cache(maxsize=None)
def cached_group(gid):
    return build(gid)


@pytest.fixture
def group():
    return cached_group


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
