import random

import pytest
from gmpy2 import mpq

from permcheck.matrices import SquareMatrix
from permcheck.matrixlab import CorrelationMatrix
from permcheck.scalars import GaussianRational


@pytest.fixture
def i4():
    return CorrelationMatrix(SquareMatrix.identity(4))


@pytest.fixture
def j4():
    return CorrelationMatrix(SquareMatrix.ones(4))


def correlation_from_entries(x, y, z, t, u, w, exact=False):
    """Patterned 4x4 matrix from the six upper-triangle entries."""
    from permcheck.proof4x4 import EntryVector

    if exact:
        conv = lambda v: v if isinstance(v, GaussianRational) else GaussianRational(mpq(v))
    else:
        conv = complex
    return CorrelationMatrix(EntryVector(*(conv(v) for v in (x, y, z, t, u, w))).assemble())


def half_matrix(exact=False):
    """All off-diagonal entries 1/2 (a valid correlation matrix)."""
    h = mpq(1, 2) if exact else 0.5
    return correlation_from_entries(h, h, h, h, h, h, exact=exact)


def rational_rng(seed):
    return random.Random(seed)
