"""Symmetric bilinear forms over F_p and the character sums W^l_m(psi).

Brute-force counters enumerate Sym^l(F_p) or GL_m(F_p) and are guarded by
size limits; exceeding a limit raises ``EnumerationLimitError``.  The
environment variable ``EISFE_MAX_ENUM`` raises (or lowers) both limits, at
your own risk.
"""

from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from math import prod

from .scalars import check_prime

__all__ = [
    "CharacterKind",
    "FormClass",
    "FpSymMatrix",
    "EnumerationLimitError",
    "legendre",
    "smallest_nonresidue",
    "sym_rank",
    "disc_character",
    "rank_counts",
    "w_count_closed",
    "w_count_bruteforce",
    "orth_order_closed",
    "orth_order_bruteforce",
    "gl_order",
    "enum_limit",
    "form_matrix",
]

SYM_ENUM_LIMIT = 1 << 24
GL_ENUM_LIMIT = 1 << 26


class EnumerationLimitError(RuntimeError):
    """A brute-force enumeration would exceed the configured size guard."""


def enum_limit(default: int) -> int:
    override = os.environ.get("EISFE_MAX_ENUM")
    if override:
        return int(override)
    return default


class CharacterKind(enum.Enum):
    TRIVIAL = "trivial"
    QUADRATIC = "quadratic"

    @classmethod
    def parse(cls, value) -> "CharacterKind":
        if isinstance(value, CharacterKind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown character {value!r}; use trivial or quadratic") from None

    def __call__(self, a: int, p: int) -> int:
        """psi(a) for the Dirichlet character mod p."""
        if self is CharacterKind.TRIVIAL:
            return 0 if a % p == 0 else 1
        return legendre(a, p)


class FormClass(enum.Enum):
    """The two square classes of nondegenerate forms: 1_m and E_m."""

    IDENTITY = "identity"
    E_M = "e_m"


def _odd_prime(p: int) -> int:
    check_prime(p)
    if p == 2:
        raise ValueError("p must be an odd prime")
    return p


def legendre(a: int, p: int) -> int:
    _odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    return next(d for d in range(2, p) if legendre(d, p) == -1)


@dataclass(frozen=True)
class FpSymMatrix:
    p: int
    entries: tuple

    def __post_init__(self):
        _odd_prime(self.p)
        rows = tuple(tuple(int(x) % self.p for x in row) for row in self.entries)
        l = len(rows)
        if any(len(r) != l for r in rows):
            raise ValueError("matrix must be square")
        for i in range(l):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix must be symmetric")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    @classmethod
    def diag(cls, p, values):
        l = len(values)
        return cls(p, tuple(tuple(values[i] if i == j else 0 for j in range(l)) for i in range(l)))

    def congruent(self, gamma) -> "FpSymMatrix":
        """Return tg * A * g."""
        l, p, a = self.size, self.p, self.entries
        ag = [[sum(a[i][k] * gamma[k][j] for k in range(l)) % p for j in range(l)] for i in range(l)]
        return FpSymMatrix(p, tuple(
            tuple(sum(gamma[k][i] * ag[k][j] for k in range(l)) % p for j in range(l)) for i in range(l)
        ))


def _diagonalize(rows, p):
    """Nonzero diagonal entries of a congruence diagonalization over F_p."""
    a = [list(r) for r in rows]
    l = len(a)
    diag = []
    k = 0
    while k < l:
        piv = next((i for i in range(k, l) if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, l) for j in range(i + 1, l) if a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # row_i += row_j, col_i += col_j: new a_ii = 2 a_ij since a_ii = a_jj = 0
            for c in range(l):
                a[i][c] = (a[i][c] + a[j][c]) % p
            for r in range(l):
                a[r][i] = (a[r][i] + a[r][j]) % p
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for r in a:
                r[k], r[piv] = r[piv], r[k]
        d = a[k][k]
        inv = pow(d, -1, p)
        for i in range(k + 1, l):
            f = a[i][k] * inv % p
            if f:
                for c in range(k, l):
                    a[i][c] = (a[i][c] - f * a[k][c]) % p
                for r in range(k, l):
                    a[r][i] = (a[r][i] - f * a[r][k]) % p
        diag.append(d)
        k += 1
    return diag


def _matrix_rank(rows, p) -> int:
    a = [list(r) for r in rows]
    rank, cols = 0, len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c] * inv % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def sym_rank(u: FpSymMatrix) -> int:
    return _matrix_rank(u.entries, u.p)


def disc_character(u: FpSymMatrix, psi) -> int:
    """psi applied to the determinant of the nondegenerate part of u."""
    psi = CharacterKind.parse(psi)
    if psi is CharacterKind.TRIVIAL:
        return 1
    diag = _diagonalize(u.entries, u.p)
    return legendre(prod(diag), u.p) if diag else 1


def gl_order(l: int, p: int) -> int:
    if l < 0:
        raise ValueError("l must be non-negative")
    return p ** (l * (l - 1) // 2) * prod(p ** r - 1 for r in range(1, l + 1))


def _ratio(l, m, p, half):
    num = prod(p ** r - 1 for r in range(l - m + 1, l + 1))
    den = prod(p ** (2 * r) - 1 for r in range(1, half + 1))
    q, rem = divmod(num, den)
    assert rem == 0
    return q


def w_count_closed(l: int, m: int, psi, p: int) -> int:
    psi = CharacterKind.parse(psi)
    _odd_prime(p)
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got l={l}, m={m}")
    if m == 0:
        return 1
    if psi is CharacterKind.TRIVIAL:
        if m % 2 == 0:
            return p ** (m * (m + 2) // 4) * _ratio(l, m, p, m // 2)
        return p ** ((m * m - 1) // 4) * _ratio(l, m, p, (m - 1) // 2)
    if m % 2:
        return 0
    return legendre(-1, p) ** (m // 2) * p ** (m * m // 4) * _ratio(l, m, p, m // 2)


def _sym_count(l, p):
    total = p ** (l * (l + 1) // 2)
    if total > enum_limit(SYM_ENUM_LIMIT):
        raise EnumerationLimitError(f"Sym^{l}(F_{p}) has {total} elements")
    return total


@lru_cache(maxsize=None)
def _sym_tally(l: int, p: int):
    """Map rank -> (count, sum of quadratic disc character)."""
    _sym_count(l, p)
    idx = [(i, j) for i in range(l) for j in range(i, l)]
    counts = [0] * (l + 1)
    sums = [0] * (l + 1)
    for vals in itertools.product(range(p), repeat=len(idx)):
        a = [[0] * l for _ in range(l)]
        for (i, j), v in zip(idx, vals):
            a[i][j] = a[j][i] = v
        diag = _diagonalize(a, p)
        r = len(diag)
        counts[r] += 1
        sums[r] += legendre(prod(diag), p) if diag else 1
    return tuple(counts), tuple(sums)


def rank_counts(l: int, p: int) -> tuple:
    """Number of u in Sym^l(F_p) of each rank 0..l, by enumeration."""
    _odd_prime(p)
    return _sym_tally(l, p)[0]


def w_count_bruteforce(l: int, m: int, psi, p: int) -> int:
    psi = CharacterKind.parse(psi)
    _odd_prime(p)
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got l={l}, m={m}")
    counts, sums = _sym_tally(l, p)
    return counts[m] if psi is CharacterKind.TRIVIAL else sums[m]


def orth_order_closed(m: int, form, p: int) -> int:
    form = form if isinstance(form, FormClass) else FormClass(form)
    _odd_prime(p)
    if m < 1:
        raise ValueError("m must be at least 1")
    if m % 2:
        return 2 * p ** ((m - 1) ** 2 // 4) * prod(p ** (2 * r) - 1 for r in range(1, (m - 1) // 2 + 1))
    sign = legendre(-1, p) ** (m // 2)
    mid = p ** (m // 2) - sign if form is FormClass.IDENTITY else p ** (m // 2) + sign
    return 2 * p ** ((m * m - 2 * m) // 4) * mid * prod(p ** (2 * r) - 1 for r in range(1, m // 2))


def form_matrix(m: int, form, p: int) -> FpSymMatrix:
    form = form if isinstance(form, FormClass) else FormClass(form)
    last = 1 if form is FormClass.IDENTITY else smallest_nonresidue(p)
    return FpSymMatrix.diag(p, [1] * (m - 1) + [last])


def orth_order_bruteforce(A: FpSymMatrix) -> int:
    """Count g in GL_m(F_p) with tg A g = A.

    Columns are chosen one at a time; column j must satisfy
    tg_i A g_j = A_ij against every earlier column and itself, which prunes
    the search to the orthogonal group rather than all of GL_m.
    """
    p, m = A.p, A.size
    if gl_order(m, p) > enum_limit(GL_ENUM_LIMIT):
        raise EnumerationLimitError(f"GL_{m}(F_{p}) has {gl_order(m, p)} elements")
    a = A.entries
    vectors = list(itertools.product(range(p), repeat=m))

    def form(x, y):
        return sum(x[i] * a[i][j] * y[j] for i in range(m) for j in range(m)) % p

    total = 0

    def extend(cols):
        nonlocal total
        j = len(cols)
        if j == m:
            g = [[cols[c][r] for c in range(m)] for r in range(m)]
            if _matrix_rank(g, p) == m:
                total += 1
            return
        for v in vectors:
            if form(v, v) != a[j][j]:
                continue
            if all(form(cols[i], v) == a[i][j] for i in range(j)):
                extend(cols + [v])

    extend([])
    return total

