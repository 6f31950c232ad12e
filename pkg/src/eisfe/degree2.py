"""Degree-2 example with the quadratic character: invariants of binary forms.

N = [[a, b/2], [b/2, c]] is a positive definite half-integral matrix and
det(2N) = 4ac - b^2 = D_N * f^2 with D_N the absolute discriminant of
Q(sqrt(-det 2N)).  For an odd prime p the p-adic normal form
N[g] = p^m (alpha, p^t beta) fixes m, t and the square class of alpha,
and from these the p-local factor F_N^(p) of the Fourier coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod
from typing import NamedTuple

from sympy import factorint, primerange
from sympy.functions.combinatorial.numbers import kronecker_symbol
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .fpforms import CharacterKind, _odd_prime, legendre
from .ratfunc import Poly, RatFunc, substitute_reciprocal
from .scalars import QuadScalar, epsilon, qs_embed

__all__ = [
    "BinaryForm",
    "LocalProfile",
    "LocalFactor",
    "RationalSymClass",
    "kronecker",
    "kronecker_general",
    "discriminant_split",
    "padic_normal_form",
    "chi_n_star_data",
    "chi_n_star_table",
    "chi_star_consistent",
    "f_local_p",
    "verify_f_local_fe",
    "smith_profile",
    "valuation",
    "reduced_forms",
    "s_degree_bound",
]


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker(a: int, q: int) -> int:
    """(a/q) for a prime q; at q = 2 the mod-8 rule."""
    if q == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 in (1, 7) else -1
    return legendre(a, q)


def kronecker_general(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for any integer n."""
    return int(kronecker_symbol(d, n))


@dataclass(frozen=True)
class BinaryForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or 4 * self.a * self.c - self.b * self.b <= 0:
            raise ValueError(f"form ({self.a}, {self.b}, {self.c}) is not positive definite")

    @property
    def det2(self) -> int:
        """det(2N) = 4ac - b^2."""
        return 4 * self.a * self.c - self.b * self.b

    @classmethod
    def parse(cls, text: str) -> "BinaryForm":
        a, b, c = (int(x) for x in text.split(","))
        return cls(a, b, c)

    def __str__(self):
        return f"{self.a},{self.b},{self.c}"


def reduced_forms(max_det: int):
    """Reduced positive forms with det(2N) <= max_det.

    Reduced means |b| <= a <= c, and b >= 0 when |b| = a or a = c.
    """
    out = []
    a = 1
    while 3 * a * a <= max_det:
        for b in range(-a, a + 1):
            c = a
            while 4 * a * c - b * b <= max_det:
                if (abs(b) == a or a == c) and b < 0:
                    c += 1
                    continue
                out.append(BinaryForm(a, b, c))
                c += 1
        a += 1
    return sorted(out, key=lambda f: (f.det2, f.a, f.b, f.c))


def discriminant_split(N: BinaryForm):
    """Return (D_N, f, {q: ord_q f})."""
    n = N.det2
    square, core = 1, 1
    for q, e in factorint(n).items():
        square *= q ** (e // 2)
        core *= q ** (e % 2)
    # -n = -core * square^2, and -core is squarefree
    if (-core) % 4 == 1:
        D, f = core, square
    else:
        D, f = 4 * core, square // 2
    assert D * f * f == n
    return D, f, {q: e for q, e in factorint(f).items()}


def padic_normal_form(N: BinaryForm, p: int):
    """(m, t, chi_p(alpha)) with N[g] = p^m (alpha, p^t beta) over Z_p."""
    _odd_prime(p)
    vals = [valuation(x, p) if x else None for x in (N.a, N.b, N.c)]
    m = min(v for v in vals if v is not None)
    if vals[0] == m:
        alpha = N.a
    elif vals[2] == m:
        alpha = N.c
    else:
        # only b reaches the minimum; N[(1, 1)] = a + b + c has valuation m
        alpha = N.a + N.b + N.c
    alpha //= p ** m
    t = valuation(N.det2, p) - 2 * m
    return m, t, legendre(alpha, p)


@dataclass(frozen=True)
class LocalProfile:
    p: int
    D_N: int
    f: int
    f_q: dict = field(hash=False)
    m: int
    t: int
    alpha_class: int
    chiNstar_at_p: int
    l_N: int
    D_N_star: int
    chi_star_disc: int

    def to_json(self):
        return {
            "p": self.p,
            "D_N": self.D_N,
            "f": self.f,
            "f_q": {str(q): e for q, e in sorted(self.f_q.items())},
            "m": self.m,
            "t": self.t,
            "alpha_class": self.alpha_class,
            "chiNstar_at_p": self.chiNstar_at_p,
            "l_N": self.l_N,
            "D_N_star": self.D_N_star,
        }


def chi_n_star_data(N: BinaryForm, p: int) -> LocalProfile:
    D, f, f_q = discriminant_split(N)
    m, t, alpha_class = padic_normal_form(N, p)
    ord_D = valuation(D, p)
    if (t % 2 == 1) != (ord_D == 1):
        raise ArithmeticError(f"parity of t={t} disagrees with p | D_N for {N}, p={p}")
    p_star = p if p % 4 == 1 else -p
    if t % 2 == 0:
        # chi_N chi_p is primitive of conductor p D_N
        disc = -D * p_star
        chi_p_val = 0
    else:
        # chi_N chi_p = chi' chi_0 with chi' the character of -D_N / p*
        disc = -D // p_star
        assert disc * p_star == -D
        chi_p_val = kronecker_general(disc, p)
    D_star = abs(disc)
    l_from_t = t // 2 if t % 2 == 0 else (t + 1) // 2
    l_N = f_q.get(p, 0) - m + ord_D
    if l_N != l_from_t:
        raise ArithmeticError(f"l_N mismatch for {N}, p={p}: {l_N} vs {l_from_t}")
    expected_star = p * D if ord_D == 0 else D // p
    if D_star != expected_star:
        raise ArithmeticError(f"conductor mismatch for {N}, p={p}")
    return LocalProfile(p, D, f, f_q, m, t, alpha_class, chi_p_val, l_N, D_star, disc)


def chi_n_star_table(prof: LocalProfile):
    """Values of chi_N^* on residues 0..D*-1, as a Dirichlet character table."""
    return [kronecker_general(prof.chi_star_disc, a) if gcd(a, prof.D_N_star) == 1 else 0
            for a in range(prof.D_N_star)]


def chi_star_consistent(N: BinaryForm, p: int, prime_bound: int = 60) -> bool:
    """Check chi_N^* as a character table mod D_N^*.

    It must agree with chi_N chi_p at primes away from p D_N, be primitive
    of conductor D_N^*, and satisfy chi_N^*(-1) = -chi_p(-1).
    """
    prof = chi_n_star_data(N, p)
    D_star = prof.D_N_star
    table = chi_n_star_table(prof)
    if kronecker_general(prof.chi_star_disc, -1) != -legendre(-1, p):
        return False
    if D_star > 1 and table[D_star - 1] != -legendre(-1, p):
        return False
    for q in primerange(2, prime_bound):
        if q == p or prof.D_N % q == 0:
            continue
        if table[q % D_star] != kronecker(-prof.D_N, q) * legendre(q, p):
            return False
    for r in factorint(D_star):
        d = D_star // r
        # primitive: not induced from modulus d
        if all(table[a] == 1 for a in range(1, D_star, d) if gcd(a, D_star) == 1):
            return False
    return True


class LocalFactor(NamedTuple):
    F: RatFunc
    S: RatFunc


def _mono(p, coef, deg):
    return RatFunc.monomial(p, coef, deg)


def f_local_p(N: BinaryForm, p: int, prof: LocalProfile | None = None) -> LocalFactor:
    """F_N^(p) and the full local series S_2^(1)(chi_p, N, 2s)_p in X = p^(-2s)."""
    prof = prof or chi_n_star_data(N, p)
    m, l, chi = prof.m, prof.l_N, prof.chiNstar_at_p
    one = RatFunc.one(p)
    y = _mono(p, p ** 3, 2)  # p^(3-4s)
    px = _mono(p, p, 1)  # p^(1-2s)
    # p^((2-2s)m + 3/2 - 2s) = p^(2m + 3/2) X^(m+1)
    pre = _mono(p, qs_embed(1, 4 * m + 3, p), m + 1)
    bracket = one - y ** l - px * chi * (one - y ** (l - 1))
    F = pre * bracket / (one - y)
    scalar = epsilon(p) * prof.alpha_class
    S = F * (one - _mono(p, p * p, 2)) / (one - px * chi) * scalar
    return LocalFactor(F, S)


def verify_f_local_fe(N: BinaryForm, p: int) -> bool:
    """F(p^-3 / X) = X^(-2(m+l)) p^(-3(m+l)) F(X) exactly."""
    prof = chi_n_star_data(N, p)
    F = f_local_p(N, p, prof).F
    w = prof.m + prof.l_N
    lhs = substitute_reciprocal(F, Fraction(1, p ** 3))
    rhs = F * _mono(p, Fraction(1, p ** (3 * w)), -2 * w)
    return lhs == rhs


def s_degree_bound(N: BinaryForm, p: int) -> int:
    """deg S_2^(1) <= ord_p det(2N) + 1 - m."""
    m, _, _ = padic_normal_form(N, p)
    return valuation(N.det2, p) + 1 - m


@dataclass(frozen=True)
class RationalSymClass:
    r: int
    R: tuple
    delta: int
    nu: int
    psi_tilde: int
    lam: tuple = ()
    deltas: tuple = ()


def _int_matrix(rows):
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), len(rows[0])), ZZ)


def _det(rows):
    n = len(rows)
    if n == 0:
        return 1
    return int(_int_matrix(rows).det())


def _mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _inverse_unimodular(A):
    inv = _int_matrix(A).to_field().inv()
    return [[int(x) for x in row] for row in inv.to_Matrix().tolist()]


def smith_profile(R, p: int, psi=CharacterKind.QUADRATIC) -> RationalSymClass:
    """delta(R), nu and psi~(R) from the elementary divisor form of R.

    R = U diag(lam_i / delta_i) V with U, V in SL_r(Z), delta_i | delta_{i+1}.
    """
    psi = CharacterKind.parse(psi)
    _odd_prime(p)
    R = [[Fraction(x) for x in row] for row in R]
    r = len(R)
    if any(len(row) != r for row in R) or any(R[i][j] != R[j][i] for i in range(r) for j in range(i)):
        raise ValueError("R must be a square symmetric matrix")
    L = lcm(*(x.denominator for row in R for x in row))
    A = [[int(x * L) for x in row] for row in R]
    smf, s, t = smith_normal_decomp(_int_matrix(A))
    d = [int(smf[i, i].element) for i in range(r)]
    s_rows = [[int(x) for x in row] for row in s.to_Matrix().tolist()]
    t_rows = [[int(x) for x in row] for row in t.to_Matrix().tolist()]
    U = _inverse_unimodular(s_rows)
    V = _inverse_unimodular(t_rows)
    # A = U diag(d) V; put the largest denominators last
    order = list(range(r))[::-1]
    d = [d[i] for i in order]
    U = [[row[i] for i in order] for row in U]
    V = [V[i] for i in order]
    lam, dens = [], []
    for di in d:
        g = gcd(di, L)
        lam.append(di // g if di else 0)
        dens.append(L // g if di else 1)
    if any(x < 0 for x in dens):
        raise ArithmeticError("negative elementary divisor")
    # make det U = det V = 1; each flip negates lam_1
    if _det(U) == -1:
        for row in U:
            row[0] = -row[0]
        lam[0] = -lam[0]
    if _det(V) == -1:
        V[0] = [-x for x in V[0]]
        lam[0] = -lam[0]
    assert _det(U) == 1 and _det(V) == 1
    check = _mul(_mul(U, [[Fraction(lam[i], dens[i]) if i == j else 0 for j in range(r)] for i in range(r)]), V)
    assert check == R
    for i in range(r - 1):
        assert dens[i + 1] % dens[i] == 0
    nu = sum(1 for x in dens if x % p)
    Ut_inv = _inverse_unimodular([list(col) for col in zip(*U)])
    W = _mul(V, Ut_inv)
    W4 = [row[nu:] for row in W[nu:]]
    value = psi(_det(W4), p)
    for i in range(nu):
        value *= psi(dens[i], p)
    for i in range(nu, r):
        value *= psi(lam[i], p)
    return RationalSymClass(
        r, tuple(tuple(row) for row in R), prod(dens), nu, value, tuple(lam), tuple(dens)
    )
