import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from matgen.gentest import (
    MatrixRing,
    ProductRing,
    block_pair,
    example_pair,
    failing_primes,
    is_generating,
    msl,
    msl_survey,
    random_beauty3_B,
    subring_index,
)
from matgen.linalg import DimensionMismatch, GF, IntMatrix, det
from matgen.presentations import modular_blocks

X, E = IntMatrix.shift, IntMatrix.unit


def closure_size_f2(a, b):
    """Brute-force size of the (non-unital) F_2-algebra generated by a, b."""
    def mul(p, q):
        return tuple(sum(p[2 * i + k] * q[2 * k + j] for k in range(2)) % 2 for i in range(2) for j in range(2))

    def add(p, q):
        return tuple((u + v) % 2 for u, v in zip(p, q))

    seen = {a, b}
    changed = True
    while changed:
        changed = False
        for p, q in list(itertools.product(seen, repeat=2)):
            for r in (add(p, q), mul(p, q)):
                if r not in seen:
                    seen.add(r)
                    changed = True
    return len(seen)


def test_f2_oracle_three_eighths():
    hits = 0
    pairs = list(itertools.product(itertools.product(range(2), repeat=4), repeat=2))
    for a, b in pairs:
        oracle = closure_size_f2(a, b) == 16
        A = IntMatrix.from_rows([a[:2], a[2:]], GF(2))
        B = IntMatrix.from_rows([b[:2], b[2:]], GF(2))
        assert is_generating(A, B).generates == oracle
        hits += oracle
    assert (hits, len(pairs)) == (96, 256)


@pytest.mark.parametrize("n", range(2, 6))
def test_shift_with_any_matrix_unit(n):
    for s in range(1, n + 1):
        for t in range(1, n + 1):
            assert is_generating(*example_pair("beauty1", n, s, t)).generates


def test_identity_pair_fails():
    rep = is_generating(IntMatrix.identity(2), IntMatrix.identity(2))
    assert not rep.generates and rep.failing_primes == "rank-deficient"


def test_scaled_pair_has_index_and_failing_prime():
    rep = is_generating(X(2).scale(3), E(2, 1, 1))
    assert not rep.generates
    assert 3 in rep.failing_primes and rep.index % 3 == 0


@pytest.mark.parametrize("seed", range(5))
def test_superdiagonal_pairs_random(seed):
    rng = np.random.default_rng(seed)
    B = random_beauty3_B(4, rng)
    assert is_generating(*example_pair("beauty3", 4, B)).generates


unimod_steps = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)), max_size=6)


@given(unimod_steps)
def test_conjugation_preserves_generation(steps):
    rows = [[int(i == j) for j in range(3)] for i in range(3)]
    for i, j, q in steps:
        if i != j:
            rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    U = IntMatrix.from_rows(rows)
    assert abs(det(U)) == 1
    assert is_generating(*example_pair("conjugate", 3, U)).generates


pair2 = st.lists(st.integers(-4, 4), min_size=8, max_size=8).map(
    lambda v: (IntMatrix.from_rows([v[0:2], v[2:4]]), IntMatrix.from_rows([v[4:6], v[6:8]]))
)


@given(pair2)
def test_local_global_per_prime(pair):
    A, B = pair
    rep = is_generating(A, B)
    fp = failing_primes(A, B)
    if fp == "rank-deficient":
        assert not rep.generates
        return
    assert rep.generates == (not fp)
    for p in (2, 3, 5, 7, 11, 13):
        mod = is_generating(A.reduce_mod(p), B.reduce_mod(p)).generates
        assert mod == (p not in fp)


@given(pair2)
def test_non_unital_generation_implies_unital(pair):
    A, B = pair
    if is_generating(A, B).generates:
        assert is_generating(A, B, unital=True).generates


def test_block_targets():
    A, B = block_pair([(X(2), E(2, 1, 1)), (X(3), E(3, 1, 1))])
    assert is_generating(A, B, ProductRing((2, 3))).generates
    A, B = block_pair([(X(2), E(2, 1, 1)), (X(2), E(2, 1, 1))])
    assert not is_generating(A, B, ProductRing((2, 2))).generates
    with pytest.raises(DimensionMismatch):
        is_generating(A, B, ProductRing((2, 3)))


def test_shift_index_sequence():
    assert subring_index([(X(2), E(2, 1, 1)), (X(2), E(2, 1, 1))]) is None
    got = [subring_index([(X(2), E(2, 1, 1)), (X(2), X(2).scale(k) + E(2, 1, 1))]) for k in (1, 2, 3, 4)]
    assert got == [1, 256, 81, 4096]


def test_modular_triple_and_quadruple():
    for labels, sizes in (((("It"), "I", "I1"), (2, 2, 2)), (("I", "It", "I1", "I1t"), (2, 2, 2, 2))):
        A, B = block_pair(modular_blocks(2, labels))
        assert is_generating(A, B, ProductRing(sizes)).generates


def test_msl_values():
    assert msl(X(3), E(3, 1, 1)) >= 2
    assert msl(X(2), E(2, 1, 1), 5) == msl(X(2), E(2, 1, 1), "QQ") == 2


def test_msl_survey_independent_of_shards():
    a = msl_survey(2, 3, 600, 4, shards=1)
    b = msl_survey(2, 3, 600, 4, shards=3)
    assert a == b
    assert a.max_msl <= 3


def test_target_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        is_generating(X(2), E(2, 1, 1), MatrixRing(3))


# GF(p^2) as pairs (a, b) = a + b*w with w^2 = s + t*w irreducible
QUAD = {2: (1, 1), 3: (2, 0), 5: (2, 0)}


def gf2_mul(u, v, p):
    s, t = QUAD[p]
    a, b = u
    c, d = v
    bd = b * d
    return ((a * c + bd * s) % p, (a * d + b * c + bd * t) % p)


def gf2_inv(u, p):
    return next((a, b) for a in range(p) for b in range(p) if gf2_mul(u, (a, b), p) == (1, 0))


def rank_gf_p2(rows, p, rng):
    """Rank over GF(p^2) after scaling each row by a random nonzero field element."""
    m = []
    for r in rows:
        k = (0, 0)
        while k == (0, 0):
            k = (int(rng.integers(p)), int(rng.integers(p)))
        m.append([gf2_mul(k, (x % p, 0), p) for x in r])
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != (0, 0)), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = gf2_inv(m[rank][c], p)
        m[rank] = [gf2_mul(inv, x, p) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != (0, 0):
                f = m[i][c]
                m[i] = [((x[0] - gf2_mul(f, y, p)[0]) % p, (x[1] - gf2_mul(f, y, p)[1]) % p) for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("p", [2, 3, 5])
def test_verdicts_agree_over_quadratic_extension(p):
    rng = np.random.default_rng(p)
    n = 2
    for a, b in rng.integers(0, p, size=(60, 2, n, n)):
        rows, frontier = [], [np.eye(n, dtype=np.int64)]
        for _ in range(n * n - 1):
            frontier = [(w @ g) % p for w in frontier for g in (a, b)]
            rows.extend(w.flatten().tolist() for w in frontier)
        ext = rank_gf_p2(rows, p, rng) == n * n
        A = IntMatrix.from_rows(a.tolist(), GF(p))
        B = IntMatrix.from_rows(b.tolist(), GF(p))
        assert is_generating(A, B).generates == ext


@given(pair2, st.integers(1, 4))
def test_span_is_monotone_in_the_bound(pair, s):
    from matgen.gentest import word_span

    A, B = pair
    small = word_span(A, B, bound=s, stop_when_full=False).span
    big = word_span(A, B, bound=s + 1, stop_when_full=False).span
    assert big.contains_lattice(small)
