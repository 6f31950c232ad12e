"""Truncated exact sums for local Siegel series of binary forms.

Every R in Sym^2(Q_p)/Sym^2(Z_p) with denominator dividing p^E is u / p^E
for exactly one u in Sym^2(Z/p^E), so summing over u enumerates each class
once.  With u of elementary divisors p^a1, p^a2 (capped at E):

    ord_p delta(R) = (E - a1) + (E - a2),   nu = #{i : a_i >= E}.

A class with larger denominator has ord_p delta > E, so the coefficients of
X^0 .. X^E are exact at depth E.

The phases e(Tr(RN)) are p^E-th roots of unity.  Terms are bucketed by the
exponent Tr(uN) mod p^E, the bucket vector is reduced modulo the cyclotomic
polynomial, and the reduced vector is matched against 1 and the quadratic
Gauss sum g = epsilon_p sqrt(p).  A nonzero residual raises
``ArithmeticError``; nothing is rounded.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .degree2 import BinaryForm, chi_n_star_data, discriminant_split, kronecker
from .fpforms import CharacterKind, EnumerationLimitError, SYM_ENUM_LIMIT, enum_limit, legendre
from .ratfunc import Poly, RatFunc, substitute_reciprocal
from .scalars import QuadScalar, check_prime, epsilon

__all__ = [
    "local_series_bruteforce",
    "ordinary_series_bruteforce",
    "stabilized_series",
    "extract_f_q",
    "verify_f_q_fe",
    "psi_tilde_from_u",
]


def _vval(arr, p, cap):
    """Elementwise p-adic valuation of an int64 array, capped; v(0) = cap."""
    out = np.zeros(arr.shape, dtype=np.int64)
    work = np.abs(arr)
    live = work != 0
    out[~live] = cap
    for _ in range(cap):
        step = live & (work % p == 0)
        if not step.any():
            break
        out[step] += 1
        work = np.where(step, work // p, work)
        live = step
    return np.minimum(out, cap)


def _char_table(p):
    return np.array([legendre(a, p) for a in range(p)], dtype=np.int64)


def _check_size(q, depth):
    total = q ** (3 * depth)
    if total > enum_limit(SYM_ENUM_LIMIT):
        raise EnumerationLimitError(f"Sym^2(Z/{q}^{depth}) has {total} elements")


def _bucket_weights(N: BinaryForm, q: int, depth: int, weight_fn):
    """weights[e, T] = sum of weight_fn over u with ord delta = e and Tr(uN) = T mod q^E."""
    Q = q ** depth
    grid_y, grid_z = np.meshgrid(np.arange(Q, dtype=np.int64), np.arange(Q, dtype=np.int64), indexing="ij")
    y, z = grid_y.ravel(), grid_z.ravel()
    vy, vz = _vval(y, q, depth), _vval(z, q, depth)
    weights = np.zeros((2 * depth + 1, Q), dtype=np.int64)
    for x in range(Q):
        vx = int(_vval(np.array([x]), q, depth)[0])
        a1 = np.minimum(np.minimum(vy, vz), vx)
        det = x * z - y * y
        vdet = _vval(det, q, 2 * depth)
        a2 = np.minimum(vdet - a1, depth)
        a2 = np.where(a1 >= depth, depth, a2)
        e = (depth - a1) + (depth - a2)
        w = weight_fn(x, y, z, vx, vy, vz, a1, a2, det)
        idx = e * Q + (x * N.a + y * N.b + z * N.c) % Q
        # weights are in {-1, 0, 1}; integer bincounts keep the sums exact
        size = weights.size
        weights += np.bincount(idx[w == 1], minlength=size).reshape(weights.shape)
        weights -= np.bincount(idx[w == -1], minlength=size).reshape(weights.shape)
    return weights


def _reduce_cyclotomic(vec, q, depth):
    """Reduce sum vec[T] zeta^T modulo Phi_{q^E}; returns the power-basis vector."""
    P = q ** (depth - 1)
    vec = vec.copy()
    phi = (q - 1) * P
    for T in range(len(vec) - 1, phi - 1, -1):
        c = vec[T]
        if c:
            r = T - phi
            # zeta^(phi + r) = -sum_{j<q-1} zeta^(jP + r)
            for j in range(q - 1):
                vec[j * P + r] -= c
            vec[T] = 0
    return vec[:phi]


def _gauss_coordinates(vec, p, depth):
    """Write vec = x + y g with g the quadratic Gauss sum; check the residual."""
    P = p ** (depth - 1)
    chi = _char_table(p)
    chi_m1 = int(chi[p - 1])
    # g = -chi(-1) + sum_{a=1}^{p-2} (chi(a) - chi(-1)) zeta^(aP)
    g = np.zeros(len(vec), dtype=np.int64)
    g[0] = -chi_m1
    for a in range(1, p - 1):
        g[a * P] = chi[a] - chi_m1
    a_idx = next(a for a in range(1, p - 1) if chi[a] != chi_m1)
    y = Fraction(int(vec[a_idx * P]), int(g[a_idx * P]))
    x = Fraction(int(vec[0])) - y * int(g[0])
    if y.denominator != 1 or x.denominator != 1:
        raise ArithmeticError("bucket sum is not an integral combination of 1 and the Gauss sum")
    resid = vec.copy()
    resid[0] -= int(x)
    resid -= int(y) * g
    if resid.any():
        raise ArithmeticError("bucket sum does not lie in Q(sqrt p); cyclotomic residual is nonzero")
    return int(x), int(y)


def psi_tilde_from_u(u, p: int, depth: int, psi=CharacterKind.QUADRATIC) -> int:
    """psi~(u / p^E) read off the diagonalised form of u over Z_p."""
    Q = p ** depth
    x = u[0] % Q
    y = np.array([u[1] % Q], dtype=np.int64)
    z = np.array([u[2] % Q], dtype=np.int64)
    vx = int(_vval(np.array([x]), p, depth)[0])
    vy, vz = _vval(y, p, depth), _vval(z, p, depth)
    a1 = np.minimum(np.minimum(vy, vz), vx)
    det = x * z - y * y
    a2 = np.where(a1 >= depth, depth, np.minimum(_vval(det, p, 2 * depth) - a1, depth))
    weight = _psi_weights(p, depth, CharacterKind.parse(psi))
    return int(weight(x, y, z, vx, vy, vz, a1, a2, det)[0])


def _psi_weights(p, depth, psi, nu=None):
    chi = _char_table(p)

    def weight(x, y, z, vx, vy, vz, a1, a2, det):
        nu_arr = (a1 >= depth).astype(np.int64) + (a2 >= depth).astype(np.int64)
        if psi is CharacterKind.TRIVIAL:
            w = np.ones_like(y)
        else:
            pa1 = p ** np.minimum(a1, depth)
            lead = np.where(vx == a1, x, np.where(vz == a1, z, x + 2 * y + z))
            b1 = chi[(lead // pa1) % p]
            du = chi[(det // (p ** np.minimum(a1 + a2, 2 * depth))) % p]
            w = np.where(a1 < depth, b1, 1) * np.where(a2 < depth, du * b1, 1)
        if nu is not None:
            w = np.where(nu_arr == nu, w, 0)
        return w

    return weight


def local_series_bruteforce(N: BinaryForm, p: int, nu: int = 1, depth: int = 3,
                            psi=CharacterKind.QUADRATIC) -> Poly:
    """Truncation of S_2^nu(psi, N, 2s)_p to X^0 .. X^depth, exact."""
    check_prime(p)
    if p == 2:
        raise ValueError("twisted series need an odd prime")
    if not 0 <= nu <= 2:
        raise ValueError("nu must be 0, 1 or 2")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    _check_size(p, depth)
    psi = CharacterKind.parse(psi)
    weights = _bucket_weights(N, p, depth, _psi_weights(p, depth, psi, nu))
    g = epsilon(p) * QuadScalar.sqrt_p(p)
    coeffs = []
    for e in range(depth + 1):
        vec = _reduce_cyclotomic(weights[e], p, depth)
        x, y = _gauss_coordinates(vec, p, depth)
        coeffs.append(QuadScalar(p, x) + g * y)
    return Poly(p, coeffs)


def ordinary_series_bruteforce(N: BinaryForm, q: int, depth: int) -> list:
    """Truncation of the ordinary local series S_2(N, X)_q; X^0 .. X^depth exact."""
    check_prime(q)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    _check_size(q, depth)
    weights = _bucket_weights(N, q, depth, lambda x, y, *rest: np.ones_like(y))
    coeffs = []
    for e in range(depth + 1):
        vec = _reduce_cyclotomic(weights[e], q, depth)
        if vec[1:].any():
            raise ArithmeticError("ordinary series coefficient is not rational")
        coeffs.append(int(vec[0]))
    return coeffs


def stabilized_series(N: BinaryForm, p: int, nu: int = 1, start: int = 1, max_depth: int = 3):
    """First depth e in [start, max_depth] whose output equals that at e + 1.

    Returns (e, poly) or (None, last poly) when no pair of consecutive
    depths up to max_depth + 1 agrees.
    """
    prev = local_series_bruteforce(N, p, nu, start)
    for e in range(start, max_depth + 1):
        nxt = local_series_bruteforce(N, p, nu, e + 1)
        if nxt == prev:
            return e, prev
        prev = nxt
    return None, prev


def _poly_divmod_int(num, den):
    """Divide integer polynomials from the constant end; den[0] = 1.

    Returns (quotient, leftover) where leftover holds num - quotient * den;
    the division is exact iff leftover is all zero.
    """
    num = list(num)
    quo = [0] * max(len(num) - len(den) + 1, 0)
    for k in range(len(quo)):
        c = num[k]
        quo[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    return quo, num


def extract_f_q(N: BinaryForm, q: int):
    """Recover F_N^(q) from the ordinary series at q.

    S_2(N, X)_q = F(X) (1 - X)(1 - q^2 X^2) / (1 - chi_N(q) q X), and F has
    degree 2 f_q, so the product S (1 - chi q X) is a polynomial of degree
    2 f_q + 3.  It is read off exactly at that depth, then divided by
    (1 - X)(1 - q^2 X^2); a nonzero remainder raises ArithmeticError.
    """
    D, _, f_q = discriminant_split(N)
    f = f_q.get(q, 0)
    chi = 0 if D % q == 0 else kronecker(-D, q)
    depth = 2 * f + 3
    b = ordinary_series_bruteforce(N, q, depth)
    prodc = [b[i] - chi * q * (b[i - 1] if i else 0) for i in range(depth + 1)]
    den = [1, -1, -q * q, q * q]  # (1 - X)(1 - q^2 X^2)
    quo, rem = _poly_divmod_int(prodc, den)
    if any(rem):
        raise ArithmeticError(f"F^({q}) extraction for {N} leaves remainder {rem}")
    while quo and quo[-1] == 0:
        quo.pop()
    return quo


def verify_f_q_fe(F, q: int, f: int) -> bool:
    """F(q^-3 / X) = (q^3 X^2)^(-f) F(X) as rational functions."""
    poly = RatFunc(Poly(q, F))
    lhs = substitute_reciprocal(poly, Fraction(1, q ** 3))
    rhs = poly * RatFunc.monomial(q, Fraction(1, q ** (3 * f)), -2 * f)
    return lhs == rhs
