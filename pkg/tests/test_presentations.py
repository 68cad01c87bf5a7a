import pytest
from hypothesis import given, strategies as st

from matgen.linalg import IntMatrix, ResourceCapExceeded, hnf, snf
from matgen.presentations import (
    BoundedIdeal,
    PresentationSpec,
    bounded_quotient_rank,
    check_H_conditions,
    check_relations,
    code_word,
    combine_specs,
    elim4_chain,
    ideal_membership_bounded,
    magnus_directness,
    modular_blocks,
    noidentity_check,
    parse_relator_file,
    relator_s,
    said45_chain,
    saidwants_model_check,
    standard_relators,
    witness_rank_growth,
    word_code,
)
from matgen.words import NcPoly, enumerate_words, evaluate_ncpoly

X, E = IntMatrix.shift, IntMatrix.unit


def dense_quotient(spec, L, m):
    """Free rank and torsion of words(<= m) modulo the degree-L ideal, by dense HNF."""
    words = enumerate_words(L, spec.unital)
    short = [w for w in words if len(w) <= m]
    cols = [w for w in words if len(w) > m] + short
    pos = {w: i for i, w in enumerate(cols)}
    rows = []
    for r in spec.relators:
        d = r.degree
        for u in enumerate_words(L - d, True):
            for v in enumerate_words(L - d - len(u), True):
                vec = [0] * len(cols)
                for w, c in r.terms.items():
                    vec[pos[u + w + v]] += c
                rows.append(vec)
    H, _ = hnf(rows) if rows else (None, None)
    nlong = len(cols) - len(short)
    inside = [r[nlong:] for r in (H.rows if H else []) if not any(r[:nlong])]
    d = snf(inside) if inside else []
    return len(short) - len(d), [x for x in d if x > 1]


CUSTOM = [
    PresentationSpec(0, "torsion", [NcPoly.parse("2*x"), NcPoly.parse("x*y - y*x"), NcPoly.parse("y^2 - 3*y")], ["a", "b", "c"]),
    PresentationSpec(0, "nonunital", [NcPoly.parse("x^2 - x", False), NcPoly.parse("3*y*x", False)], ["a", "b"], False),
]


@pytest.mark.parametrize(
    "spec,L",
    [
        (standard_relators(2, "grigdream"), 5),
        (standard_relators(2, "dvoika"), 5),
        (standard_relators(3, "troika"), 5),
        (standard_relators(2, "noidentity"), 5),
        (CUSTOM[0], 4),
        (CUSTOM[1], 5),
    ],
)
def test_quotient_rank_matches_dense_oracle(spec, L):
    for m in range(spec.max_degree - 1, L + 1):
        q = BoundedIdeal(spec, L).quotient_rank(m)
        assert (q.free_rank, q.torsion) == dense_quotient(spec, L, m)


def test_custom_torsion_detected():
    q = bounded_quotient_rank(CUSTOM[0], 4, m=1)
    assert q.torsion == [2]


def test_word_codes_round_trip_and_order():
    ws = enumerate_words(4, True)
    assert all(code_word(word_code(w)) == w for w in ws)
    by_code = sorted(ws, key=word_code)
    assert by_code == sorted(ws, key=lambda w: (len(w), w))


small_poly = st.dictionaries(st.text("xy", min_size=1, max_size=2), st.integers(-2, 2), min_size=1, max_size=3).map(
    NcPoly
)


@given(
    st.lists(small_poly.filter(bool), min_size=1, max_size=2),
    st.lists(
        st.tuples(st.text("xy", max_size=1), st.integers(0, 1), st.text("xy", max_size=1), st.integers(-3, 3)),
        min_size=1,
        max_size=4,
    ),
)
def test_certificates_are_sound(rels, combo):
    spec = PresentationSpec(0, "random", rels, [f"g{i}" for i in range(len(rels))])
    target = NcPoly({})
    for u, i, v, c in combo:
        target = target + c * NcPoly.word(u) * rels[i % len(rels)] * NcPoly.word(v)
    cert = BoundedIdeal(spec, 4).membership(target)
    assert cert is not None
    again = NcPoly({})
    for u, i, v, c in cert.terms:
        again = again + c * NcPoly.word(u) * rels[i] * NcPoly.word(v)
    assert again == target and cert.verify(rels)


def test_non_member_is_inconclusive():
    spec = standard_relators(2, "free", unital=True)
    assert ideal_membership_bounded(NcPoly.parse("x"), spec, 3) is None


def test_relator_lists():
    assert [str(r) for r in standard_relators(2, "grigdream").relators] == ["x^2 - 1", "x^2*y + x*y*x - 1", "y*x*y"]
    assert standard_relators(4, "said45").names == ["r1_4", "r2_4", "s0", "s1"]
    assert standard_relators(3, "dnepr").names == ["r1_3", "r2_3", "s0", "s1"]
    with pytest.raises(ValueError):
        standard_relators(6, "said45")


@pytest.mark.parametrize("n", range(2, 9))
def test_shift_and_unit_satisfy_relators(n):
    A, B = X(n), E(n, 1, 1)
    assert check_relations(A, B, standard_relators(n, "grigdream")).passed
    assert check_relations(A, B, standard_relators(n, "dnepr")).passed


def test_swapped_pair_violates():
    assert not check_relations(E(2, 1, 1), X(2), standard_relators(2, "grigdream")).passed


mat3 = st.lists(st.integers(-2, 2), min_size=9, max_size=9).map(lambda v: IntMatrix.from_rows([v[0:3], v[3:6], v[6:9]]))


@given(mat3, mat3, st.integers(-3, 3))
def test_modular_is_the_shift_substitution(A, B, m):
    shifted = standard_relators(3, "modular", m=m)
    base = standard_relators(3, "grigdream")
    for r, r0 in zip(shifted.relators, base.relators):
        assert evaluate_ncpoly(r, A, B) == evaluate_ncpoly(r0, A, A.scale(m) + B)
    trans = standard_relators(3, "modular", m=m, transpose=True)
    for r, r0 in zip(trans.relators, shifted.relators):
        assert evaluate_ncpoly(r, A, B) == evaluate_ncpoly(r0, B, A)


@pytest.mark.parametrize("m", [-2, 0, 1, 3])
def test_modular_blocks_satisfy_their_relators(m):
    for n in (2, 3):
        (A, B), (At, Bt) = modular_blocks(n, [("I", m), ("It", m)])
        assert check_relations(A, B, standard_relators(n, "modular", m=m)).passed
        assert check_relations(At, Bt, standard_relators(n, "modular", m=m, transpose=True)).passed


def test_standard_n2_stabilizes():
    q = bounded_quotient_rank(standard_relators(2, "grigdream"), 6)
    assert (q.free_rank, q.torsion) == (4, [])


def test_free_rank_counts_words():
    assert bounded_quotient_rank(standard_relators(2, "free"), 2).free_rank == 6


def test_circulant_extended_rank():
    assert bounded_quotient_rank(standard_relators(2, "saidwants_full"), 8).free_rank == 6


def test_sum_of_modular_ideals_contains_one():
    spec = combine_specs(standard_relators(2, "grigdream"), standard_relators(2, "modular", m=1))
    cert = ideal_membership_bounded(NcPoly.one(), spec, 4)
    assert cert is not None and cert.verify(spec.relators)


def test_three_relator_ideal_gives_s2():
    spec = standard_relators(3, "troika")
    cert = ideal_membership_bounded(relator_s(2), spec, 8)
    assert cert is not None and cert.verify(spec.relators)


@pytest.mark.parametrize("n", [4, 5])
def test_chain_identities_vanish(n):
    A, B = X(n), E(n, 1, 1)
    assert all(evaluate_ncpoly(f, A, B).is_zero() for f in said45_chain(n).values())


@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 2), (5, 3)])
def test_dropped_relator_chain_vanishes(n, k):
    A, B = X(n), E(n, 1, 1)
    assert all(evaluate_ncpoly(f, A, B).is_zero() for f in elim4_chain(n, k).values())


def test_cap_is_enforced():
    with pytest.raises(ResourceCapExceeded):
        BoundedIdeal(standard_relators(2, "grigdream"), 16, cap=14)


def test_H_conditions():
    r = check_H_conditions(7, {1, 2})
    assert not r.valid and r.violated == "a" and r.witness == (1, 1, 2)
    assert check_H_conditions(5, {1, 4}).valid
    assert not check_H_conditions(5, {1, 4}, zero_sums="violation").valid
    with pytest.raises(ValueError):
        check_H_conditions(4, {1, 2, 3})


@pytest.mark.parametrize("kind,n,h", [("elim1", 2, None), ("elim2", 2, None), ("elim7", 5, 1), ("elim8", 5, 1), ("elim7", 4, 2)])
def test_witnesses(kind, n, h):
    rep = witness_rank_growth(kind, n, h)
    assert rep.ok and rep.strictly_increasing


def test_missing_power_relation_ranks_frozen():
    assert witness_rank_growth("elim1", 2).ranks == [18, 42, 66]


@pytest.mark.parametrize("n", [2, 3])
def test_extension_ring_directness(n):
    rep = magnus_directness(n)
    assert rep.ok
    assert rep.ranks["S0"] == n * (n - 1)


def test_central_idempotent_model():
    assert all(saidwants_model_check(3).values())


def test_non_unital_listed_vs_completed():
    rep = noidentity_check(2)
    assert rep.relators_vanish and rep.spanning_words_generate
    assert rep.quotient.free_rank == 6
    assert rep.completed.free_rank == 4 and rep.ok
    assert all(rep.pair_model.values())


def test_parse_relator_file():
    rels = parse_relator_file("# comment\nx^2 - 1\n\ny*x*y\n")
    assert [str(r) for r in rels] == ["x^2 - 1", "y*x*y"]
