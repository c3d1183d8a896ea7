import numpy as np
import pytest

from cfarim.config import load_scenario
from cfarim.runner import run_scenario
from cfarim.signal_model import SweepConfig


@pytest.fixture(scope="session")
def table1():
    return load_scenario("table1.scenario")


@pytest.fixture(scope="session")
def table1_run(table1):
    return run_scenario(table1)


@pytest.fixture(scope="session")
def victim(table1) -> SweepConfig:
    return table1.victim


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
