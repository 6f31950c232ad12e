import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisfe.fpforms import (
    CharacterKind,
    EnumerationLimitError,
    FormClass,
    FpSymMatrix,
    disc_character,
    form_matrix,
    gl_order,
    legendre,
    orth_order_bruteforce,
    orth_order_closed,
    rank_counts,
    smallest_nonresidue,
    sym_rank,
    w_count_bruteforce,
    w_count_closed,
)

TRIV, QUAD = CharacterKind.TRIVIAL, CharacterKind.QUADRATIC


@pytest.mark.parametrize("a,p,v", [(1, 3, 1), (-1, 3, -1), (2, 7, 1), (3, 3, 0), (2, 5, -1)])
def test_legendre(a, p, v):
    assert legendre(a, p) == v


def test_legendre_rejects_two():
    with pytest.raises(ValueError):
        legendre(1, 2)


def test_sym_rank_examples():
    assert sym_rank(FpSymMatrix(3, [[0, 0], [0, 0]])) == 0
    assert sym_rank(FpSymMatrix.diag(5, [1, 1, 1])) == 3
    assert sym_rank(FpSymMatrix(3, [[1, 1], [1, 1]])) == 1


def test_disc_character_examples():
    assert disc_character(FpSymMatrix(3, [[0, 0], [0, 0]]), QUAD) == 1
    for p in (3, 5, 7):
        d = smallest_nonresidue(p)
        assert disc_character(FpSymMatrix.diag(p, [1, d]), QUAD) == -1
    assert disc_character(FpSymMatrix(3, [[1, 1], [1, 1]]), QUAD) == 1


def test_asymmetric_rejected():
    with pytest.raises(ValueError):
        FpSymMatrix(3, [[1, 2], [0, 1]])


def test_w_closed_examples():
    for p in (3, 5, 7):
        for l in range(4):
            assert w_count_closed(l, 0, QUAD, p) == 1
        assert w_count_closed(2, 1, QUAD, p) == 0
    assert w_count_closed(1, 1, TRIV, 3) == 2


def test_w_bruteforce_examples():
    assert w_count_bruteforce(1, 1, TRIV, 3) == 2
    assert w_count_bruteforce(1, 1, QUAD, 5) == 0
    assert w_count_bruteforce(2, 2, QUAD, 3) == w_count_closed(2, 2, QUAD, 3)


def test_w_frozen_values():
    # independently: the 27 symmetric 2x2 matrices over F_3, of which the
    # 18 invertible ones split 6 : 12 between det a square and not
    assert w_count_bruteforce(2, 2, QUAD, 3) == -6
    assert rank_counts(2, 3) == (1, 8, 18)


def test_orth_closed_examples():
    assert orth_order_closed(1, FormClass.IDENTITY, 7) == 2
    assert orth_order_closed(2, FormClass.IDENTITY, 3) == 8
    assert orth_order_closed(2, FormClass.E_M, 3) == 4


def test_orth_bruteforce_examples():
    assert orth_order_bruteforce(FpSymMatrix.diag(5, [1])) == 2
    assert orth_order_bruteforce(FpSymMatrix.diag(3, [1, 1])) == 8
    assert orth_order_bruteforce(FpSymMatrix.diag(3, [1, 2])) == 4


@pytest.mark.parametrize("l,v", [(1, 2), (2, 48), (3, 11232)])
def test_gl_order(l, v):
    assert gl_order(l, 3) == v


def test_gl_order_by_enumeration():
    p = 3
    count = sum(
        1 for a, b, c, d in itertools.product(range(p), repeat=4) if (a * d - b * c) % p
    )
    assert count == gl_order(2, p)


def test_enumeration_guard(monkeypatch):
    monkeypatch.setenv("EISFE_MAX_ENUM", "100")
    with pytest.raises(EnumerationLimitError):
        w_count_bruteforce(3, 2, TRIV, 5)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_w_closed_matches_bruteforce(l, p):
    for m in range(l + 1):
        for psi in CharacterKind:
            assert w_count_closed(l, m, psi, p) == w_count_bruteforce(l, m, psi, p)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("l", [1, 2, 3])
def test_rank_stratification(l, p):
    counts = rank_counts(l, p)
    assert sum(counts) == p ** (l * (l + 1) // 2)
    for m in range(l + 1):
        assert w_count_closed(l, m, TRIV, p) == counts[m]


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("l", [1, 2])
def test_coset_identity(l, p):
    """#{u of rank l in a class} = |GL_l| / |O(class)|."""
    per_class = {1: 0, -1: 0}
    for vals in itertools.product(range(p), repeat=l * (l + 1) // 2):
        rows = [[0] * l for _ in range(l)]
        it = iter(vals)
        for i in range(l):
            for j in range(i, l):
                rows[i][j] = rows[j][i] = next(it)
        u = FpSymMatrix(p, rows)
        if sym_rank(u) == l:
            per_class[disc_character(u, QUAD)] += 1
    assert per_class[1] == gl_order(l, p) // orth_order_closed(l, FormClass.IDENTITY, p)
    assert per_class[-1] == gl_order(l, p) // orth_order_closed(l, FormClass.E_M, p)


def _random_gl(rng, l, p):
    while True:
        g = [[rng.randrange(p) for _ in range(l)] for _ in range(l)]
        if sym_rank_of_any(g, p) == l:
            return g


def sym_rank_of_any(g, p):
    # rank of a general matrix via Gram of rows would be wrong; eliminate directly
    rows = [list(r) for r in g]
    rank, col, n = 0, 0, len(rows)
    while rank < n and col < n:
        piv = next((r for r in range(rank, n) if rows[r][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        for r in range(n):
            if r != rank and rows[r][col] % p:
                f = rows[r][col] * inv
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 4), st.integers(0, 2 ** 32))
def test_disc_character_gl_invariant(p, l, seed):
    rng = random.Random(seed)
    rows = [[0] * l for _ in range(l)]
    for i in range(l):
        for j in range(i, l):
            rows[i][j] = rows[j][i] = rng.randrange(p)
    u = FpSymMatrix(p, rows)
    g = _random_gl(rng, l, p)
    v = u.congruent(g)
    assert sym_rank(v) == sym_rank(u)
    for psi in CharacterKind:
        assert disc_character(v, psi) == disc_character(u, psi)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
@pytest.mark.parametrize("m", [1, 2])
def test_orth_closed_matches_bruteforce(m, p):
    for form in FormClass:
        assert orth_order_bruteforce(form_matrix(m, form, p)) == orth_order_closed(m, form, p)


def test_orth_m3_p3():
    for form in FormClass:
        assert orth_order_bruteforce(form_matrix(3, form, 3)) == orth_order_closed(3, form, 3)


def test_character_parse():
    assert CharacterKind.parse("Quadratic") is QUAD
    with pytest.raises(ValueError):
        CharacterKind.parse("cubic")
    assert QUAD(2, 3) == -1 and TRIV(3, 3) == 0

