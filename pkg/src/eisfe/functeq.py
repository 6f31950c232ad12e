"""Normalising factors gamma_nu, the anti-diagonal T and the FE matrix.

The matrix ``fe_matrix(ctx)`` = B(kappa - s)^{-1} T(s) B(s) carries the
vector of completed Eisenstein series at s to the vector at kappa - s.
Archimedean factors are the same for every cusp and are left out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fpforms import CharacterKind
from .ratfunc import Poly, RatFunc, rf_substitute_fe
from .scalars import QuadScalar, epsilon, qs_embed
from .upoperator import EisensteinContext, RFMatrix, _unit_upper_inverse, b_inverse, b_matrix

__all__ = [
    "GammaFactor",
    "gamma_factor",
    "t_matrix",
    "fe_matrix",
    "fe_involution_ok",
    "eigen_fe_scalar",
    "local_siegel_unramified",
]


@dataclass(frozen=True)
class GammaFactor:
    """gamma_nu(psi, s) = scalar * rational, with ``rational`` over Q(X)."""

    nu: int
    scalar: QuadScalar
    rational: RatFunc

    @property
    def value(self) -> RatFunc:
        return self.rational * self.scalar

    def at_reflected(self, n: int) -> RatFunc:
        """gamma_nu(psi, kappa_n - s); only the X-part moves."""
        return rf_substitute_fe(self.rational, n) * self.scalar


def _binomial(p, c0, c1, deg):
    # c0 + c1 X^deg as a polynomial
    coeffs = [0] * (deg + 1)
    coeffs[0] += c0
    coeffs[deg] += c1
    return Poly(p, coeffs)


def _pair_product(q, nu):
    """prod_{i=1}^{[nu/2]} (1 - q^{2i} X^2) / (1 - q^{2nu+1-2i} X^2)."""
    num, den = Poly.const(q, 1), Poly.const(q, 1)
    for i in range(1, nu // 2 + 1):
        num = num * _binomial(q, 1, -(q ** (2 * i)), 2)
        den = den * _binomial(q, 1, -(q ** (2 * nu + 1 - 2 * i)), 2)
    return num, den


def gamma_factor(ctx: EisensteinContext, nu: int) -> GammaFactor:
    p = ctx.p
    if not 0 <= nu <= ctx.n:
        raise ValueError(f"need 0 <= nu <= {ctx.n}")
    num, den = _pair_product(p, nu)
    if ctx.psi is CharacterKind.TRIVIAL:
        num = num * _binomial(p, 1, -1, 1)
        den = den * _binomial(p, 1, -(p ** nu), 1)
        scalar = QuadScalar(p, 1)
    else:
        scalar = (epsilon(p) * qs_embed(1, -1, p)) ** nu
    return GammaFactor(nu, scalar, RatFunc(num, den))


def t_matrix(ctx: EisensteinContext) -> RFMatrix:
    """Anti-diagonal; entry (n-nu, nu) is gamma_nu(s) / gamma_{n-nu}(kappa - s)."""
    n, p = ctx.n, ctx.p
    zero = RatFunc.zero(p)
    rows = [[zero] * (n + 1) for _ in range(n + 1)]
    for nu in range(n + 1):
        rows[n - nu][nu] = eigen_fe_scalar(ctx, nu)
    return RFMatrix(p, rows)


def eigen_fe_scalar(ctx: EisensteinContext, nu: int) -> RatFunc:
    g = gamma_factor(ctx, nu)
    h = gamma_factor(ctx, ctx.n - nu)
    reflected = rf_substitute_fe(h.rational, ctx.n)
    return g.rational / reflected * (g.scalar / h.scalar)


def fe_matrix(ctx: EisensteinContext) -> RFMatrix:
    B = b_matrix(ctx)
    B_reflected_inv = _unit_upper_inverse(B.substitute_fe(ctx.n))
    return B_reflected_inv @ t_matrix(ctx) @ B


def fe_involution_ok(ctx: EisensteinContext, fe: RFMatrix | None = None) -> bool:
    """FE(kappa - s) * FE(s) = 1 exactly."""
    fe = fe if fe is not None else fe_matrix(ctx)
    return (fe.substitute_fe(ctx.n) @ fe).is_identity()


def reflected_b_inverse(ctx: EisensteinContext) -> RFMatrix:
    """B^{-1} with s -> kappa - s applied entrywise."""
    return b_inverse(ctx).substitute_fe(ctx.n)


def local_siegel_unramified(nu: int, psi_at_q: int, q: int) -> RatFunc:
    """S_nu(psi, 0, 2s)_q for q != p, in X_q = q^(-2s)."""
    if nu < 0:
        raise ValueError("nu must be non-negative")
    if psi_at_q not in (-1, 0, 1):
        raise ValueError("psi(q) must be -1, 0 or 1")
    num, den = _pair_product(q, nu)
    num = num * _binomial(q, 1, -psi_at_q, 1)
    den = den * _binomial(q, 1, -psi_at_q * Fraction(q) ** nu, 1)
    return RatFunc(num, den)
