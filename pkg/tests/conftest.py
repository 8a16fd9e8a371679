from fractions import Fraction

import pytest

from poscodegree import KGraph, StepHypergraphon
from poscodegree.hypergraphon import StepHypergraphon as SH


@pytest.fixture
def k4():
    return KGraph.complete(4, 3)


@pytest.fixture
def single_edge():
    return KGraph(3, 3, frozenset({(0, 1, 2)}))


@pytest.fixture
def book():
    """Two 3-edges sharing two vertices."""
    return KGraph(4, 3, frozenset({(0, 1, 2), (0, 1, 3)}))


@pytest.fixture
def k4_minus_edge():
    return KGraph(4, 3, frozenset({(0, 1, 2), (0, 1, 3), (0, 2, 3)}))


def make_pair_coordinate_w() -> StepHypergraphon:
    """k=3, two half parts, value 1 exactly when all three pair coordinates
    fall in the first part.  Edge density 1/8; the two pair-cell degrees are
    1/4 and 0."""
    half = Fraction(1, 2)
    positions = tuple(
        frozenset(c) for c in [(0, 1), (0, 2), (1, 2)]
    )
    values = []
    for a in range(2):
        for b in range(2):
            for c in range(2):
                values.append(Fraction(1 if a == b == c == 0 else 0))
    return SH(3, (half, half), positions, tuple(values))


@pytest.fixture
def pair_w():
    return make_pair_coordinate_w()


# one verdict line per acceptance criterion, echoed after the run so the
# lines are visible even though pytest captures per-test stdout
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
