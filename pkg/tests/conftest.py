import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from simplexcert.polyring import Form, monomials


@pytest.fixture
def rng():
    return random.Random(20240611)


def xy():
    return Form.variable(2, 0), Form.variable(2, 1)


def xyz():
    return tuple(Form.variable(3, i) for i in range(3))


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def forms(draw, n=None, d=None, max_n=3, max_d=3):
    n = n or draw(st.integers(1, max_n))
    d = d if d is not None else draw(st.integers(0, max_d))
    mons = monomials(n, d)
    coeffs = draw(st.lists(rationals, min_size=len(mons), max_size=len(mons)))
    return Form(n, d, dict(zip(mons, coeffs)))


@st.composite
def points(draw, n):
    return tuple(draw(st.lists(rationals, min_size=n, max_size=n)))


@st.composite
def simplex_points(draw, n, interior=False):
    lo = 1 if interior else 0
    w = draw(st.lists(st.integers(lo, 30), min_size=n, max_size=n).filter(lambda v: sum(v) > 0))
    s = sum(w)
    return tuple(Fraction(a, s) for a in w)
