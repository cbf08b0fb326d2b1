import functools

import pytest

from extrikit.instances import FIXTURES, load_fixture
from extrikit.negext import NegTower


@functools.lru_cache(maxsize=None)
def fixture(name):
    return load_fixture(name)


@functools.lru_cache(maxsize=None)
def neg_tower(name):
    return NegTower(fixture(name).tower)


@pytest.fixture(params=FIXTURES)
def any_fixture(request):
    return fixture(request.param)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
