"""
Shared fixtures for the qentry40 tests.

Run from the project root:

    pytest -q
"""

import mpmath
import pytest

from qentry40.qcore import QContext

#: working precision of the unit tests
TEST_BITS = 128


@pytest.fixture
def ctx() -> QContext:
    """Real base q = 0.3 at 128 bits."""
    return QContext(0.3, precision_bits=TEST_BITS)


@pytest.fixture
def cctx() -> QContext:
    """Complex base of modulus 0.35 at 128 bits."""
    return QContext(0.35 * mpmath.expj(0.4), precision_bits=TEST_BITS)


@pytest.fixture
def oracle():
    """Global mpmath at the test precision, restored afterwards."""
    with mpmath.workprec(TEST_BITS):
        yield mpmath.mp


def close(x, y, tol=1e-25) -> bool:
    """Relative agreement with an absolute floor for values near zero."""
    return abs(x - y) <= tol * max(abs(x), abs(y), 1e-300)
