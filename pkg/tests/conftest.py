import pytest

from bruckbose.spread import bruck_bose, build_spread


@pytest.fixture(scope="session")
def bb2():
    return bruck_bose(2)


@pytest.fixture(scope="session")
def bb3():
    return bruck_bose(3)


@pytest.fixture(scope="session")
def spread4():
    return build_spread(4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
