import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from eisfe.ratfunc import Poly, RatFunc
from eisfe.scalars import QuadScalar

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PRIMES = (3, 5, 7, 11, 13)

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def quad_scalars(p, allow_zero=True):
    s = st.builds(
        lambda a, b, c, d: QuadScalar(p, a, b, c, d),
        small_fractions, small_fractions, small_fractions, small_fractions,
    )
    if not allow_zero:
        s = s.filter(lambda x: not x.is_zero())
    return s


def rational_scalars(p, allow_zero=True):
    s = small_fractions.map(lambda r: QuadScalar(p, r))
    if not allow_zero:
        s = s.filter(lambda x: not x.is_zero())
    return s


def polys(p, max_degree=3, scalars=None):
    scalars = rational_scalars(p) if scalars is None else scalars
    return st.lists(scalars, min_size=0, max_size=max_degree + 1).map(lambda cs: Poly(p, cs))


def ratfuncs(p, max_degree=3, scalars=None):
    return st.builds(
        lambda n, d: RatFunc(n, d),
        polys(p, max_degree, scalars),
        polys(p, max_degree, scalars).filter(lambda q: not q.is_zero()),
    )


@pytest.fixture
def p3():
    return 3


def frac(n, d=1):
    return Fraction(n, d)
