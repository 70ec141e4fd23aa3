import numpy as np
import pytest
from hypothesis import strategies as st

from warpft.warp import OddPolynomial, SignedMonomial


@st.composite
def odd_polynomials(draw, max_terms=4):
    n = draw(st.integers(1, max_terms))
    a1 = draw(st.floats(0.05, 5.0))
    rest = draw(st.lists(st.floats(0.0, 2.0), min_size=n - 1, max_size=n - 1))
    return OddPolynomial((a1, *rest))


@st.composite
def signed_monomials(draw):
    return SignedMonomial(draw(st.floats(0.1, 5.0)), draw(st.floats(0.2, 4.0)))


warps = st.one_of(odd_polynomials(), signed_monomials())


@pytest.fixture
def cubic():
    """W = x + x^3."""
    return OddPolynomial((1.0, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
