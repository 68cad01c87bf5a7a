"""Regression corpus of the reference examples: each entry recomputes a value
and compares it with the expected one."""

from __future__ import annotations

from . import circulant, density, g2, gentest, presentations
from .linalg import IntMatrix
from .words import NcPoly, build_T, enumerate_words, evaluate_ncpoly, flatten

X = IntMatrix.shift
Y = lambda n: IntMatrix.unit(n, 1, 1)  # noqa: E731


def _entries():
    P = presentations
    yield "words m=1", lambda: enumerate_words(1), ["x", "y"]
    yield "words m=2", lambda: enumerate_words(2), ["x", "xx", "xy", "y", "yx", "yy"]
    yield "flatten E11", lambda: list(flatten(IntMatrix.unit(2, 1, 1))), [1, 0, 0, 0]
    yield "flatten [[1,2],[3,4]]", lambda: list(flatten(IntMatrix.from_rows([[1, 2], [3, 4]]))), [1, 2, 3, 4]
    yield "r1 at (X,Y), n=3", lambda: evaluate_ncpoly(P.relator_r1(3), X(3), Y(3)).is_zero(), True
    yield "T rows m=3", lambda: build_T(3, X(2), Y(2)).rows, 14
    yield "(X, E23) generates M4", lambda: gentest.is_generating(X(4), IntMatrix.unit(4, 2, 3)).generates, True
    yield (
        "beauty1 all s,t, n=2..5",
        lambda: all(
            gentest.is_generating(*gentest.example_pair("beauty1", n, s, t)).generates
            for n in range(2, 6)
            for s in range(1, n + 1)
            for t in range(1, n + 1)
        ),
        True,
    )
    yield (
        "block pair M2+M3",
        lambda: gentest.is_generating(*gentest.block_pair([(X(2), Y(2)), (X(3), Y(3))]), gentest.ProductRing((2, 3))).generates,
        True,
    )
    yield "failing primes (X,Y)", lambda: sorted(gentest.failing_primes(X(3), Y(3))), []
    yield "index (X,Y),(X,2X+Y)", lambda: gentest.subring_index([(X(2), Y(2)), (X(2), X(2).scale(2) + Y(2))]), 256
    yield "index single block", lambda: gentest.subring_index([(X(2), Y(2))]), 1
    yield "index (X,Y),(X,X+Y)", lambda: gentest.subring_index([(X(2), Y(2)), (X(2), X(2) + Y(2))]), 1
    yield "msl survey n=2 p=3", lambda: gentest.msl_survey(2, 3, 1000, 0).max_msl <= 2, True
    yield (
        "pell c=1..3 solutions generate",
        lambda: all(
            abs(s.value) == 1 and g2.g2_fast_check(*s.pair()).generates
            for c in (1, 2, 3)
            for s in g2.enumerate_solutions(c, 5)
        ),
        True,
    )
    yield "pell c=1 first three", lambda: [(s.a, s.b) for s in g2.enumerate_solutions(1, 3)], [(0, 1), (1, 1), (2, 1)]
    yield "relators grigdream n=2", lambda: [str(r) for r in P.standard_relators(2, "grigdream").relators], [
        "x^2 - 1",
        "x^2*y + x*y*x - 1",
        "y*x*y",
    ]
    yield "relators said45 n=4", lambda: P.standard_relators(4, "said45").names, ["r1_4", "r2_4", "s0", "s1"]
    yield "relators dnepr n=3", lambda: P.standard_relators(3, "dnepr").names, ["r1_3", "r2_3", "s0", "s1"]
    yield (
        "grigdream holds n=2..8",
        lambda: all(P.check_relations(X(n), Y(n), P.standard_relators(n, "grigdream")).passed for n in range(2, 9)),
        True,
    )
    yield "free quotient L=2", lambda: P.bounded_quotient_rank(P.standard_relators(2, "free"), 2).free_rank, 6
    yield "saidwants_full n=2 rank", lambda: P.bounded_quotient_rank(P.standard_relators(2, "saidwants_full"), 8).free_rank, 6
    yield (
        "s2 in said45 n=4 ideal",
        lambda: P.ideal_membership_bounded(P.relator_s(2), P.standard_relators(4, "said45"), 14) is not None,
        True,
    )
    yield (
        "s2 in troika ideal",
        lambda: P.ideal_membership_bounded(P.relator_s(2), P.standard_relators(3, "troika"), 8) is not None,
        True,
    )
    yield (
        "1 in I2 + I2(1)",
        lambda: P.ideal_membership_bounded(
            NcPoly.one(), P.combine_specs(P.standard_relators(2, "grigdream"), P.standard_relators(2, "modular", m=1)), 4
        )
        is not None,
        True,
    )
    yield "elim1(2) ranks", lambda: P.witness_rank_growth("elim1", 2).ranks, [18, 42, 66]
    yield "elim7(5,1) audit", lambda: P.witness_rank_growth("elim7", 5, 1).ok, True
    yield "elim8(5,1) audit", lambda: P.witness_rank_growth("elim8", 5, 1).ok, True
    yield "magnus n=2", lambda: P.magnus_directness(2).ok, True
    yield "magnus n=3", lambda: P.magnus_directness(3).ok, True
    yield "noidentity n=2 listed relators rank", lambda: P.noidentity_check(2).quotient.free_rank, 6
    yield "noidentity n=2 completed rank", lambda: P.noidentity_check(2).completed.free_rank, 4
    yield "units n=4 bound 2 nontrivial", lambda: sum(not u.trivial for u in circulant.find_circulant_units(4, 2)), 0
    yield "units n=5 bound 2 nontrivial", lambda: sum(not u.trivial for u in circulant.find_circulant_units(5, 2)) > 0, True
    yield "higman n=2,5,6", lambda: [circulant.higman_rank(n) for n in (2, 5, 6)], [0, 1, 0]
    yield (
        "n=5 Y1 checks",
        lambda: all(
            circulant.build_and_verify_Y1(u.c, u.d).ok for u in circulant.find_circulant_units(5, 2) if not u.trivial
        ),
        True,
    )
    yield (
        "fq n=2 increasing in q",
        lambda: [r.estimate for r in [density.fq_fraction(2, q, samples=4000, seed=11) for q in (2, 3, 5, 7)]]
        == sorted(r.estimate for r in [density.fq_fraction(2, q, samples=4000, seed=11) for q in (2, 3, 5, 7)]),
        True,
    )
    yield (
        "g2z k=20 below k=2",
        lambda: density.g2z_box_fraction(20, 20000, 1).estimate < density.g2z_box_fraction(2, 20000, 1).estimate,
        True,
    )
    yield "coprime P=2", lambda: str(density.coprimality_product(2).product), "9/256"
    yield (
        "check (X, E11) n=3",
        lambda: gentest.is_generating(X(3), Y(3)).generates,
        True,
    )


def _normalise(v):
    if isinstance(v, tuple):
        return [_normalise(x) for x in v]
    if isinstance(v, list):
        return [_normalise(x) for x in v]
    return v


def run_corpus() -> dict:
    entries = []
    for name, fn, expected in _entries():
        observed = _normalise(fn())
        expected = _normalise(expected)
        entries.append({"id": name, "expected": expected, "observed": observed, "ok": observed == expected})
    return {"entries": entries, "ok": all(e["ok"] for e in entries), "count": len(entries)}
