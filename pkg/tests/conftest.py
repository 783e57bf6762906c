from fractions import Fraction

import pytest

from weylmaj import rootsys as R


@pytest.fixture(scope="session")
def systems():
    return {lab: R.build(R.parse_label(lab)) for lab in ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "BC1", "BC2", "F4"]}


def vec(*xs):
    return tuple(Fraction(x) for x in xs)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
