"""Acceptance gate: one PASS/FAIL line per criterion.

Run under pytest (the lines are repeated in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import time

import numpy as np

from matgen.circulant import (
    build_and_verify_Y1,
    canonical_model,
    canonicalize_representation,
    find_circulant_units,
    higman_rank,
    random_unimodular,
)
from matgen.density import coprimality_product, fq_fraction, g2z_box_fraction
from matgen.g2 import enumerate_solutions, g2_fast_check
from matgen.gentest import (
    ProductRing,
    block_pair,
    example_pair,
    failing_primes,
    integer_inverse,
    is_generating,
    random_beauty3_B,
    subring_index,
)
from matgen.linalg import IntMatrix
from matgen.presentations import (
    BoundedIdeal,
    bounded_quotient_rank,
    check_relations,
    magnus_directness,
    modular_blocks,
    relator_s,
    said45_chain,
    standard_relators,
    witness_rank_growth,
)
from matgen.words import evaluate_ncpoly

LINES: dict[int, str] = {}

# tolerances and budgets
Z_TOL = 3.0
BUDGET_FAST = 60.0
BUDGET_DENSITY = 600.0
CERT_L = 14


def record(num: int, title: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title} | {detail}"
    LINES[num] = line
    print(line)
    assert ok, line


def _shift(n):
    return IntMatrix.shift(n)


def _unit(n):
    return IntMatrix.unit(n, 1, 1)


def test_c01_shift_pair_families():
    t0 = time.time()
    beauty1 = all(
        is_generating(*example_pair("beauty1", n, s, t)).generates
        for n in range(2, 6)
        for s in range(1, n + 1)
        for t in range(1, n + 1)
    )
    rng = np.random.default_rng(101)
    b3 = 0
    for i in range(25):
        n = 2 + i % 4
        B = random_beauty3_B(n, rng)
        A = IntMatrix.from_rows(
            [[1 if j == r + 1 else (int(rng.integers(-2, 3)) if j > r + 1 else 0) for j in range(n)] for r in range(n)]
        )
        b3 += is_generating(*example_pair("beauty3", n, B, A)).generates
    dt = time.time() - t0
    record(1, "beauty families", beauty1 and b3 == 25 and dt < BUDGET_FAST, f"beauty1 all={beauty1}, beauty3 {b3}/25, {dt:.1f}s")


def test_c02_g2_oracle_equivalence():
    rng = np.random.default_rng(202)
    mats = rng.integers(-5, 6, size=(10_000, 2, 2, 2))
    agree = gen = 0
    for a, b in mats:
        A, B = IntMatrix.from_rows(a.tolist()), IntMatrix.from_rows(b.tolist())
        slow = is_generating(A, B).generates
        agree += g2_fast_check(A, B).generates == slow
        gen += slow
    record(2, "2x2 determinant test vs span test", agree == len(mats), f"{agree}/{len(mats)} agree, {gen} generating")


def test_c03_local_global():
    rng = np.random.default_rng(303)
    total = ok = 0
    for n in (2, 3):
        for a, b in rng.integers(-3, 4, size=(500, 2, n, n)):
            A, B = IntMatrix.from_rows(a.tolist()), IntMatrix.from_rows(b.tolist())
            rep = is_generating(A, B)
            fp = failing_primes(A, B)
            full = fp != "rank-deficient"
            good = rep.generates == (full and not fp)
            if full:
                for p in sorted(set(fp) | {2, 3, 5, 7}):
                    good &= is_generating(A.reduce_mod(p), B.reduce_mod(p)).generates == (p not in fp)
            ok += good
            total += 1
    record(3, "local-global principle", ok == total, f"{ok}/{total} pairs consistent with per-prime tests")


def test_c04_quadratic_unit_pipeline():
    good = True
    seen = {}
    for c in (1, 2, 3):
        sols = enumerate_solutions(c, 5)
        seen[c] = [(s.a, s.b) for s in sols]
        for s in sols:
            A1, B1 = s.pair()
            good &= s.value in (1, -1)
            good &= g2_fast_check(A1, B1).generates and is_generating(A1, B1, unital=True).generates
    has = (1, 1) in seen[1] and (2, 1) in seen[1]
    record(4, "quadratic-unit solutions generate", good and has, f"c=1: {seen[1]}")


def test_c05_presentations_hold():
    rel_ok = all(
        check_relations(_shift(n), _unit(n), standard_relators(n, v)).passed for n in range(2, 9) for v in ("grigdream", "dnepr")
    )
    stable = {}
    for n in (2, 3, 4):
        spec = standard_relators(n, "grigdream")
        prev = None
        for L in range(spec.max_degree, 13):
            q = bounded_quotient_rank(spec, L)
            cur = (q.free_rank, tuple(q.torsion))
            if cur == (n * n, ()) and prev == cur:
                stable[n] = L
                break
            prev = cur
    record(5, "relations and bounded ranks", rel_ok and len(stable) == 3, f"relations={rel_ok}, rank n^2 repeated at L={stable}")


def test_c06_shortened_presentation_certificates():
    chains_vanish = all(
        evaluate_ncpoly(f, _shift(n), _unit(n)).is_zero() for n in (4, 5) for f in said45_chain(n).values()
    )
    found = {}
    for n, targets in ((4, (2, 3)), (5, (2, 3, 4))):
        spec = standard_relators(n, "said45")
        ideal = BoundedIdeal(spec, CERT_L)
        for j in targets:
            cert = ideal.membership(relator_s(j))
            found[f"n={n} s{j}"] = cert is not None and cert.verify(spec.relators)
    ok = chains_vanish and all(found.values())
    missing = [k for k, v in found.items() if not v]
    record(6, "shortened presentations", ok, f"chains vanish={chains_vanish}, L={CERT_L}, missing certificates: {missing or 'none'}")


def test_c07_witnesses():
    reps = {
        f"{k}({n}{',' + str(h) if h else ''})": witness_rank_growth(k, n, h)
        for k, n, h in (("elim1", 2, None), ("elim2", 2, None), ("elim7", 5, 1), ("elim8", 5, 1))
    }
    ok = all(r.ok and len(r.ranks) >= 3 for r in reps.values())
    record(7, "infinite-rank witnesses", ok, ", ".join(f"{k} {r.ranks}" for k, r in reps.items()))


def test_c08_extension_ring_directness():
    t0 = time.time()
    reps = [magnus_directness(n) for n in (2, 3, 4)]
    dt = time.time() - t0
    ok = all(r.ok for r in reps) and dt < BUDGET_FAST
    record(8, "directness in the extension ring", ok, f"n=2,3,4 ok={[r.ok for r in reps]}, {dt:.1f}s")


def test_c09_circulants():
    zero = [n for n in range(2, 13) if higman_rank(n) == 0]
    nontrivial = {n: sum(not u.trivial for u in find_circulant_units(n, 2)) for n in (2, 3, 4, 5, 6)}
    y1 = [build_and_verify_Y1(u.c, u.d) for u in find_circulant_units(5, 2) if not u.trivial]
    y1_ok = bool(y1) and all(
        r.ok and r.Y1.trace() == 1 and r.positive_entries > 0 and r.negative_entries > 0 for r in y1
    )
    ok = zero == [2, 3, 4, 6] and all(nontrivial[n] == 0 for n in (2, 3, 4, 6)) and nontrivial[5] > 0 and y1_ok
    record(9, "circulant units and idempotents", ok, f"rank 0 at {zero}, nontrivial {nontrivial}, {len(y1)} idempotents verified={y1_ok}")


def test_c10_canonical_round_trip():
    rng = np.random.default_rng(1010)
    X1, Y1 = canonical_model(2, 2, 1)
    good = 0
    for _ in range(100):
        U = random_unimodular(X1.rows, rng)
        Ui = integer_inverse(U)
        Xc, Yc = Ui @ X1 @ U, Ui @ Y1 @ U
        cf = canonicalize_representation(Xc, Yc, 2)
        Bi = integer_inverse(cf.B)
        good += (cf.k, cf.r) == (2, 1) and Bi @ Xc @ cf.B == X1 and Bi @ Yc @ cf.B == Y1
    record(10, "canonical form round trip", good == 100, f"{good}/100 recovered with (k, r) = (2, 1)")


def test_c11_modular_direct_sums():
    part3 = is_generating(*block_pair([(_shift(2), _unit(2)), (_shift(3), _unit(3))]), ProductRing((2, 3))).generates
    part4 = is_generating(*block_pair(modular_blocks(2, ["It", "I", "I1"])), ProductRing((2, 2, 2))).generates
    part5 = is_generating(*block_pair(modular_blocks(2, ["I", "It", "I1", "I1t"])), ProductRing((2, 2, 2, 2))).generates
    idx = {(k, l): subring_index(modular_blocks(2, [("I", k), ("I", l)])) for k, l in ((0, 2), (0, 3), (1, 3), (-1, 2))}
    finite = all(v is not None and v > 1 for v in idx.values())
    ok = part3 and part4 and part5 and finite
    record(11, "modular direct sums", ok, f"part3={part3}, triple={part4}, quadruple={part5}, indices {idx}")


def test_c12_density_suite():
    t0 = time.time()
    exact = fq_fraction(2, 2, "exhaustive")
    mc = fq_fraction(2, 2, samples=10_000, seed=1)
    z_fq = (mc.estimate - exact.estimate) / mc.std_error
    trend = [fq_fraction(2, q, samples=10_000, seed=7).estimate for q in (2, 3, 5, 7, 11)]
    increasing = all(a < b for a, b in zip(trend, trend[1:]))
    k2 = g2z_box_fraction(2, 100_000, 1).estimate
    k20 = g2z_box_fraction(20, 100_000, 1).estimate
    cop = coprimality_product(1000, mc=(10**9, 100_000, 3))
    dt = time.time() - t0
    ok = abs(z_fq) <= Z_TOL and increasing and k20 < k2 and abs(cop.z_score) <= Z_TOL and dt < BUDGET_DENSITY
    detail = (
        f"F2 exact {exact.exact_value} vs MC {mc.estimate:.4f} (z={z_fq:+.2f}); "
        f"q-trend {[round(v, 3) for v in trend]}; box k=2 {k2:.4f} > k=20 {k20:.5f}; "
        f"product {cop.decimal:.6f} vs MC {cop.mc.estimate:.6f} (z={cop.z_score:+.2f}); {dt:.0f}s"
    )
    record(12, "density suite", ok, detail)


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
