import random
from fractions import Fraction
from math import isqrt

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from eisfe.degree2 import (
    BinaryForm,
    chi_n_star_data,
    chi_star_consistent,
    discriminant_split,
    f_local_p,
    kronecker,
    padic_normal_form,
    reduced_forms,
    s_degree_bound,
    smith_profile,
    valuation,
    verify_f_local_fe,
)
from eisfe.fpforms import legendre
from eisfe.ratfunc import Poly, RatFunc
from eisfe.scalars import QuadScalar, epsilon

CORPUS = reduced_forms(200)
PRIMES = (3, 7, 11)


def form(text):
    return BinaryForm.parse(text)


@pytest.mark.parametrize("a,v", [(7, 1), (5, -1), (4, 0), (1, 1), (3, -1), (-1, 1), (0, 0)])
def test_kronecker_at_two(a, v):
    assert kronecker(a, 2) == v


@given(st.integers(-500, 500), st.sampled_from([2, 3, 5, 7, 11]))
def test_kronecker_matches_sympy(a, q):
    assert kronecker(a, q) == sympy.kronecker_symbol(a, q)


@pytest.mark.parametrize("text,expected", [
    ("1,0,1", (4, 1, {})),
    ("1,0,3", (3, 2, {2: 1})),
    ("1,1,1", (3, 1, {})),
])
def test_discriminant_split_examples(text, expected):
    assert discriminant_split(form(text)) == expected


def _is_fundamental(d):
    # d < 0 a fundamental discriminant
    if d % 4 == 1:
        return sympy.ntheory.factor_.core(-d) == -d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and sympy.ntheory.factor_.core(-m) == -m
    return False


@pytest.mark.parametrize("N", CORPUS, ids=str)
def test_discriminant_split_by_search(N):
    """Largest square f^2 with -det/f^2 a fundamental discriminant."""
    det = N.det2
    best = max(f for f in range(1, isqrt(det) + 1) if det % (f * f) == 0 and _is_fundamental(-det // (f * f)))
    D, f, f_q = discriminant_split(N)
    assert (D, f) == (det // best ** 2, best)
    assert f_q == {q: e for q, e in sympy.factorint(f).items()}


@pytest.mark.parametrize("text,expected", [
    ("1,0,3", (0, 1, 1)),
    ("1,0,1", (0, 0, 1)),
    ("1,1,1", (0, 1, 1)),
])
def test_padic_normal_form_examples(text, expected):
    assert padic_normal_form(form(text), 3) == expected


def test_profile_examples():
    prof = chi_n_star_data(form("1,0,1"), 3)
    assert (prof.chiNstar_at_p, prof.D_N_star, prof.l_N) == (0, 12, 0)
    prof = chi_n_star_data(form("1,0,3"), 3)
    assert (prof.t, prof.chiNstar_at_p, prof.D_N_star, prof.l_N) == (1, 1, 1, 1)


def _alpha_class_by_search(N, p, m):
    """Unit class of any primitive value of N / p^m not divisible by p."""
    for x in range(p):
        for y in range(p):
            v = N.a * x * x + N.b * x * y + N.c * y * y
            if v % p ** (m + 1) and v % p ** m == 0:
                return legendre(v // p ** m, p)
    return None


@pytest.mark.parametrize("p", PRIMES)
def test_profile_invariants_on_corpus(p):
    for N in CORPUS:
        prof = chi_n_star_data(N, p)
        D, f = prof.D_N, prof.f
        assert N.det2 == D * f * f
        ord_d = valuation(D, p)
        assert prof.l_N == prof.f_q.get(p, 0) - prof.m + ord_d
        assert prof.l_N == (prof.t // 2 if prof.t % 2 == 0 else (prof.t + 1) // 2)
        assert prof.D_N_star == (p * D if ord_d == 0 else D // p)
        assert prof.m == min(valuation(x, p) for x in (N.a, N.b, N.c) if x)
        if prof.t > 0:
            # alpha is only an invariant when the two unit classes are separated
            assert prof.alpha_class == _alpha_class_by_search(N, p, prof.m)
        assert chi_star_consistent(N, p)


@pytest.mark.parametrize("p", PRIMES)
def test_local_fe_on_corpus(p):
    assert all(verify_f_local_fe(N, p) for N in CORPUS)


@pytest.mark.parametrize("text", ["1,0,3", "1,0,1", "2,1,2"])
def test_local_fe_examples(text):
    assert verify_f_local_fe(form(text), 3)


def test_f_diag13_is_p_three_halves_x():
    F, S = f_local_p(form("1,0,3"), 3)
    assert F == RatFunc.monomial(3, QuadScalar(3, 0, 0, 3), 1)
    # S carries epsilon chi(alpha) and the factor (1 - 9X^2)/(1 - 3X) = 1 + 3X
    assert S == F * RatFunc.from_coeffs(3, [1, 3]) * epsilon(3)


def test_s_frozen_1_1_7():
    S = f_local_p(form("1,1,7"), 3).S
    g = QuadScalar(3, 0, 0, 0, 1)  # i sqrt 3 = epsilon_3 sqrt 3
    assert S == RatFunc(Poly(3, [0, g * 3, 0, g * 54, g * 243]))


def test_f_zero_for_t_zero():
    assert f_local_p(form("1,0,1"), 3).F.is_zero()


@pytest.mark.parametrize("p", PRIMES)
def test_s_is_polynomial_within_bound(p):
    for N in CORPUS:
        S = f_local_p(N, p).S
        assert S.den.degree == 0
        assert S.num.degree <= s_degree_bound(N, p)


def test_reduced_forms():
    forms = reduced_forms(60)
    assert len(forms) == 73
    for N in forms:
        assert abs(N.b) <= N.a <= N.c
        if abs(N.b) == N.a or N.a == N.c:
            assert N.b >= 0
    assert len(CORPUS) == 459


def test_binary_form_validation():
    with pytest.raises(ValueError):
        BinaryForm(1, 2, 1)
    with pytest.raises(ValueError):
        BinaryForm.parse("1,2")


# -- smith_profile -----------------------------------------------------------

def test_smith_integral():
    for R in ([[0, 0], [0, 0]], [[1, 2], [2, 5]], [[3]]):
        prof = smith_profile(R, 3)
        r = len(R)
        assert (prof.delta, prof.nu, prof.psi_tilde) == (1, r, 1)


def test_smith_rank_one_denominator():
    prof = smith_profile([[Fraction(1, 3), 0], [0, 0]], 3)
    assert (prof.delta, prof.nu) == (3, 1)


def _rand_sym(rng, r, den):
    rows = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            rows[i][j] = rows[j][i] = Fraction(rng.randrange(-2 * den, 2 * den), den)
    return rows


@given(st.integers(0, 2 ** 32), st.integers(1, 3))
def test_smith_integral_shift_invariance(seed, r):
    rng = random.Random(seed)
    R = _rand_sym(rng, r, 9)
    S = _rand_sym(rng, r, 1)
    shifted = [[R[i][j] + S[i][j] for j in range(r)] for i in range(r)]
    a, b = smith_profile(R, 3), smith_profile(shifted, 3)
    assert (a.delta, a.nu, a.psi_tilde) == (b.delta, b.nu, b.psi_tilde)


@given(st.integers(0, 2 ** 32), st.sampled_from([(3, 5), (3, 7), (5, 3), (7, 11)]), st.integers(1, 2))
def test_smith_multiplicativity(seed, primes, r):
    p, q = primes
    rng = random.Random(seed)
    Rp = _rand_sym(rng, r, p ** rng.randrange(1, 3))
    Rq = _rand_sym(rng, r, q)
    R = [[Rp[i][j] + Rq[i][j] for j in range(r)] for i in range(r)]
    a, b, c = smith_profile(Rp, p), smith_profile(Rq, p), smith_profile(R, p)
    assert c.delta == a.delta * b.delta
    assert c.psi_tilde == a.psi_tilde * legendre(b.delta, p)


def test_smith_rejects_asymmetric():
    with pytest.raises(ValueError):
        smith_profile([[1, 2], [3, 4]], 3)
