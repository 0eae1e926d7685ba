import pytest

from twophoton import default_grid, make_gaussian, one_photon_output, two_photon_output


@pytest.fixture(scope="session")
def long_pulse():
    return make_gaussian(10.0)


@pytest.fixture(scope="session")
def short_pulse():
    return make_gaussian(1.0)


@pytest.fixture(scope="session")
def long_one(long_pulse):
    return one_photon_output(long_pulse, default_grid(10.0))


@pytest.fixture(scope="session")
def short_one(short_pulse):
    return one_photon_output(short_pulse, default_grid(1.0))


@pytest.fixture(scope="session")
def long_two(long_pulse):
    return two_photon_output(long_pulse, default_grid(10.0))


@pytest.fixture(scope="session")
def short_two(short_pulse):
    return two_photon_output(short_pulse, default_grid(1.0))


# acceptance outcomes, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
