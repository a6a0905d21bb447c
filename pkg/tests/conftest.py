import pytest

from dqw import GAAS, solve_states

EQUAL_MASS = GAAS.with_(mb=GAAS.m0, mc=GAAS.m0)


@pytest.fixture(scope="session")
def gaas():
    return GAAS


@pytest.fixture(scope="session")
def equal_mass():
    return EQUAL_MASS


@pytest.fixture(scope="session")
def gaas_states():
    return solve_states(GAAS)


@pytest.fixture(scope="session")
def equal_mass_states():
    return solve_states(EQUAL_MASS)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
