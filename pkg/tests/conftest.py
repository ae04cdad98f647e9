from fractions import Fraction

import pytest

from cubespan.lattice import LatticeSpec

F = Fraction


def lattice(n, *gens, r=None):
    """Lattice from integer numerators over a common denominator ``r``."""
    if r is not None:
        gens = [[F(x, r) for x in g] for g in gens]
    return LatticeSpec(n=n, generators=tuple(tuple(F(x) for x in g) for g in gens))


@pytest.fixture
def rank6():
    return lattice(8, (1, 9, 3, 7, 1, 1, 3, 5), (2, 8, 6, 4, 1, 1, 3, 0), r=10)


@pytest.fixture
def white_5_2():
    return lattice(3, (2, 3, 1), r=5)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
