import sys

import pytest
from hypothesis import settings

from zeckauto import bench

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fib():
    return bench.fib_session()


@pytest.fixture(scope="session")
def trib():
    return bench.trib_session()



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in mod.RESULTS:
            terminalreporter.write_line(r.line())
