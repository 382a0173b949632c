import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pgm.pcp import PcPresentation


@pytest.fixture(scope="session")
def c9():
    # cyclic of order 9: g1^3 = g2
    return PcPresentation(3, 2, powers={0: [(1, 1)]})


@pytest.fixture(scope="session")
def c3x3():
    return PcPresentation(3, 2)


@pytest.fixture(scope="session")
def h27():
    # extraspecial 3^3 of exponent 3
    return PcPresentation(3, 3, comms={(1, 0): [(2, 1)]})


@pytest.fixture(scope="session")
def m27():
    # nonabelian 3^3 of exponent 9: g2^3 = g3, [g2, g1] = g3
    return PcPresentation(3, 3, powers={1: [(2, 1)]}, comms={(1, 0): [(2, 1)]})


@pytest.fixture(scope="session")
def mc81():
    # maximal-class 3^4, exponent 9 (split extension of C3 acting on a
    # length-3 truncated cyclotomic module): s1^3 = s3^2, [s1,s]=s2, [s2,s]=s3
    return PcPresentation(
        3, 4,
        powers={1: [(3, 2)]},
        comms={(1, 0): [(2, 1)], (2, 0): [(3, 1)]},
    )
