"""The U(p) transition matrix, its triangular eigenbasis and the inverse.

Conventions: coefficient vectors are rows, so row i of ``b_matrix`` is the
eigenfunction E^{n,(i)} written in the basis E(w_0), ..., E(w_n), and the
eigen-identity reads B M = Lambda B.  The global factor p^(n(k/2 - s)) is
kept separately as an ``AffineExponent``.  Nothing here depends on k except
that prefactor and the parity check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from .fpforms import CharacterKind, _odd_prime, legendre
from .ratfunc import AffineExponent, RatFunc, exponent_l, rf_substitute_fe, rf_to_monomial

__all__ = [
    "ParityError",
    "DegenerateSpectrum",
    "EisensteinContext",
    "RFMatrix",
    "EigenData",
    "m_entry",
    "up_matrix",
    "b_matrix",
    "b_inverse",
    "lambda_matrix",
    "triangular_eigenvectors",
    "eigen_data",
    "minimal_weight",
]


class ParityError(ValueError):
    """The weight k does not satisfy psi(-1) = (-1)^k."""


class DegenerateSpectrum(ValueError):
    """Two diagonal entries coincide, so the triangular recursion breaks down."""


@dataclass(frozen=True)
class EisensteinContext:
    p: int
    n: int
    k: int
    psi: CharacterKind

    def __post_init__(self):
        object.__setattr__(self, "psi", CharacterKind.parse(self.psi))
        _odd_prime(self.p)
        if self.n < 1:
            raise ValueError("degree n must be at least 1")
        sign = 1 if self.psi is CharacterKind.TRIVIAL else legendre(-1, self.p)
        if sign != (-1) ** self.k:
            raise ParityError(
                f"weight k={self.k} violates psi(-1) = (-1)^k for the {self.psi.value} character mod {self.p}"
            )

    @property
    def delta_p(self) -> int:
        return (1 - (-1) ** self.k) // 2

    def to_json(self):
        return {"p": self.p, "n": self.n, "k": self.k, "character": self.psi.value}


def minimal_weight(p: int, psi) -> int:
    """Smallest positive k with psi(-1) = (-1)^k."""
    psi = CharacterKind.parse(psi)
    if psi is CharacterKind.TRIVIAL or legendre(-1, p) == 1:
        return 2
    return 1


class RFMatrix:
    """Square matrix of RatFunc entries sharing one prime tag."""

    __slots__ = ("p", "rows")

    def __init__(self, p: int, rows):
        self.p = p
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise ValueError("RFMatrix must be square")
            for e in r:
                if e.p != p:
                    raise ValueError("entries must share the prime tag")

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def identity(cls, p, size):
        one, zero = RatFunc.one(p), RatFunc.zero(p)
        return cls(p, [[one if i == j else zero for j in range(size)] for i in range(size)])

    @classmethod
    def diagonal(cls, p, values):
        zero = RatFunc.zero(p)
        size = len(values)
        return cls(p, [[values[i] if i == j else zero for j in range(size)] for i in range(size)])

    def transpose(self):
        return RFMatrix(self.p, zip(*self.rows))

    def map(self, fn):
        return RFMatrix(self.p, [[fn(e) for e in row] for row in self.rows])

    def substitute_fe(self, n: int):
        """Entrywise s -> kappa_n - s."""
        return self.map(lambda f: rf_substitute_fe(f, n))

    def __matmul__(self, other):
        if other.size != self.size or other.p != self.p:
            raise ValueError("incompatible matrices")
        size = self.size
        out = []
        for i in range(size):
            row = []
            for j in range(size):
                acc = RatFunc.zero(self.p)
                for r in range(size):
                    a, b = self.rows[i][r], other.rows[r][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RFMatrix(self.p, out)

    def __eq__(self, other):
        if not isinstance(other, RFMatrix):
            return NotImplemented
        return self.p == other.p and self.size == other.size and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    __hash__ = None

    def is_identity(self) -> bool:
        return self == RFMatrix.identity(self.p, self.size)

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j].is_zero() for i in range(self.size) for j in range(i))

    def is_lower_triangular(self) -> bool:
        return self.transpose().is_upper_triangular()

    def is_anti_diagonal(self) -> bool:
        n = self.size - 1
        return all(
            self.rows[i][j].is_zero() for i in range(self.size) for j in range(self.size) if i + j != n
        )

    def is_over_q(self) -> bool:
        return all(e.is_over_q() for row in self.rows for e in row)

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.rows]

    @classmethod
    def from_json(cls, p, data):
        return cls(p, [[RatFunc.from_json(p, e) for e in row] for row in data])

    def to_text(self) -> str:
        cells = [[str(e) for e in row] for row in self.rows]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def _products(p, i, j, half):
    num = prod(p ** r - 1 for r in range(i + 1, j + 1))
    den = prod(p ** (2 * r) - 1 for r in range(1, half + 1))
    return Fraction(num, den)


def m_entry(ctx: EisensteinContext, i: int, j: int) -> RatFunc:
    """m_psi(s)_{ij} with p^(2si) written as X^(-i)."""
    p, n = ctx.p, ctx.n
    if not (0 <= i <= n and 0 <= j <= n):
        raise IndexError(f"indices must lie in 0..{n}")
    if i > j:
        return RatFunc.zero(p)
    d = j - i
    if ctx.psi is CharacterKind.TRIVIAL:
        if d % 2 == 0:
            shift, half = Fraction(d * (d + 2), 4), d // 2
        else:
            shift, half = Fraction(d * d - 1, 4), (d - 1) // 2
        sign = 1
    else:
        if d % 2:
            return RatFunc.zero(p)
        shift, half = Fraction(d * d, 4), d // 2
        sign = legendre(-1, p) ** half
    expo = -Fraction(j * (j + 1), 2) + shift
    assert expo.denominator == 1
    coef = sign * Fraction(p) ** int(expo) * _products(p, i, j, half)
    return RatFunc.monomial(p, coef, -i)


@lru_cache(maxsize=None)
def _up_matrix(p, n, psi):
    ctx = _Shape(p, n, psi)
    return RFMatrix(p, [[m_entry(ctx, i, j) for j in range(n + 1)] for i in range(n + 1)])


@dataclass(frozen=True)
class _Shape:
    # the k-independent part of a context, used as a cache key
    p: int
    n: int
    psi: CharacterKind


def up_matrix(ctx: EisensteinContext):
    """Return (M, prefactor) with U(p) = p^prefactor * M in the row convention."""
    M = _up_matrix(ctx.p, ctx.n, ctx.psi)
    prefactor = AffineExponent(Fraction(ctx.n * ctx.k, 2), -ctx.n)
    return M, prefactor


def _eigenvalue(p, i) -> RatFunc:
    # X^(-i) p^(-i(i+1)/2)
    return RatFunc.monomial(p, Fraction(1, p ** (i * (i + 1) // 2)), -i)


def lambda_matrix(ctx: EisensteinContext) -> RFMatrix:
    return RFMatrix.diagonal(ctx.p, [_eigenvalue(ctx.p, i) for i in range(ctx.n + 1)])


@lru_cache(maxsize=None)
def _b_matrix(p, n, psi):
    M = _up_matrix(p, n, psi)
    zero, one = RatFunc.zero(p), RatFunc.one(p)
    b = [[zero] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        b[i][i] = one
        # -X^i p^(i(i+1)/2)
        lead = RatFunc.monomial(p, -Fraction(p ** (i * (i + 1) // 2)), i)
        for j in range(i + 1, n + 1):
            acc = zero
            for r in range(i, j):
                if not M[r, j].is_zero() and not b[i][r].is_zero():
                    acc = acc + M[r, j] * b[i][r]
            if acc.is_zero():
                continue
            d = j - i
            # p^((j-i)(2s - (j+i+1)/2)) = X^(-(j-i)) p^(-(j-i)(j+i+1)/2); the exponent is an integer
            twice = d * (j + i + 1)
            assert twice % 2 == 0
            factor = RatFunc.monomial(p, Fraction(1, p ** (twice // 2)), -d)
            b[i][j] = lead * acc / (factor - one)
    return RFMatrix(p, b)


def b_matrix(ctx: EisensteinContext) -> RFMatrix:
    return _b_matrix(ctx.p, ctx.n, ctx.psi)


def _unit_upper_inverse(B: RFMatrix) -> RFMatrix:
    p, size = B.p, B.size
    zero, one = RatFunc.zero(p), RatFunc.one(p)
    inv = [[zero] * size for _ in range(size)]
    # column by column: solve B x = e_j by back substitution
    for j in range(size):
        inv[j][j] = one
        for i in range(j - 1, -1, -1):
            acc = zero
            for r in range(i + 1, j + 1):
                if not B[i, r].is_zero() and not inv[r][j].is_zero():
                    acc = acc + B[i, r] * inv[r][j]
            inv[i][j] = -acc
    return RFMatrix(p, inv)


@lru_cache(maxsize=None)
def _b_inverse(p, n, psi):
    return _unit_upper_inverse(_b_matrix(p, n, psi))


def b_inverse(ctx: EisensteinContext) -> RFMatrix:
    """B^{-1}; its (nu, r) entry is the local series S_r^nu(psi, 0, 2s)_p."""
    return _b_inverse(ctx.p, ctx.n, ctx.psi)


def triangular_eigenvectors(A: RFMatrix, lam) -> RFMatrix:
    """Eigenvectors of a lower-triangular A with distinct diagonal lam.

    Column i of the result is v^(i), normalised by v^(i)_i = 1.  Each column
    is checked against A v = lam_i v before returning.
    """
    p, size = A.p, A.size
    lam = list(lam)
    if len(lam) != size:
        raise ValueError("need one eigenvalue per row")
    if not A.is_lower_triangular():
        raise ValueError("matrix must be lower triangular")
    for i in range(size):
        if A[i, i] != lam[i]:
            raise ValueError(f"lam[{i}] differs from the diagonal entry")
        for j in range(i):
            if lam[i] == lam[j]:
                raise DegenerateSpectrum(f"diagonal entries {j} and {i} coincide")
    zero, one = RatFunc.zero(p), RatFunc.one(p)
    cols = []
    for i in range(size):
        v = [zero] * size
        v[i] = one
        for j in range(i + 1, size):
            acc = zero
            for k in range(i, j):
                if not A[j, k].is_zero() and not v[k].is_zero():
                    acc = acc + A[j, k] * v[k]
            v[j] = -acc / (lam[j] - lam[i])
        for r in range(size):
            lhs = zero
            for c in range(size):
                if not A[r, c].is_zero() and not v[c].is_zero():
                    lhs = lhs + A[r, c] * v[c]
            if lhs != lam[i] * v[r]:
                raise ArithmeticError(f"column {i} fails the eigenvector check in row {r}")
        cols.append(v)
    return RFMatrix(p, [[cols[c][r] for c in range(size)] for r in range(size)])


@dataclass(frozen=True)
class EigenData:
    exponents: tuple
    prefactor: AffineExponent
    normalized_eigs: tuple

    def to_json(self):
        return {
            "prefactor": self.prefactor.to_json(),
            "eigen_exponents": [e.to_json() for e in self.exponents],
            "normalized_eigs": [f.to_json() for f in self.normalized_eigs],
        }


def eigen_data(ctx: EisensteinContext) -> EigenData:
    M, prefactor = up_matrix(ctx)
    exps = tuple(exponent_l(ctx.n, ctx.k, j) for j in range(ctx.n + 1))
    eigs = tuple(rf_to_monomial(e - prefactor, ctx.p) for e in exps)
    for j, f in enumerate(eigs):
        if f != M[j, j]:
            raise ArithmeticError(f"eigenvalue {j} disagrees with the diagonal of M")
        if any(f == g for g in eigs[:j]):
            raise DegenerateSpectrum(f"eigenvalue {j} repeats")
    return EigenData(exps, prefactor, eigs)
