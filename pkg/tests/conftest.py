import os

import pytest
from hypothesis import HealthCheck, settings

from spikit.generators import gen_paper_game

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("SPIKIT_HYPOTHESIS", "default"))


@pytest.fixture(scope="session")
def seaway():
    return gen_paper_game("seaway")


@pytest.fixture(scope="session")
def seaway_token():
    return gen_paper_game("seaway_token")


@pytest.fixture(scope="session")
def negotiation():
    return gen_paper_game("negotiation")


@pytest.fixture(scope="session")
def temptation():
    return gen_paper_game("temptation")


@pytest.fixture(scope="session")
def why_iso():
    return gen_paper_game("why_iso")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance") or sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
