from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from matgen.density import (
    coprimality_factor,
    coprimality_product,
    fq_exact_count,
    fq_fraction,
    fq_sweep,
    g2z_box_fraction,
    to_csv,
)
from matgen.linalg import ResourceCapExceeded


def test_exact_fraction_f2():
    r = fq_fraction(2, 2, "exhaustive")
    assert (r.successes, r.trials, r.exact_value) == (96, 256, "3/8")


def test_mc_agrees_with_exact():
    r = fq_fraction(2, 2, samples=10_000, seed=1)
    assert abs(r.estimate - 3 / 8) <= 3 * r.std_error


@pytest.mark.parametrize("shards", [2, 3])
def test_results_do_not_depend_on_shards(shards):
    assert fq_fraction(2, 3, samples=1500, seed=5) == fq_fraction(2, 3, samples=1500, seed=5, shards=shards)
    assert g2z_box_fraction(3, 3000, 2) == g2z_box_fraction(3, 3000, 2, shards=shards)
    a = coprimality_product(5, mc=(100, 2000, 9))
    b = coprimality_product(5, mc=(100, 2000, 9), shards=shards)
    assert a.mc == b.mc


def test_seed_changes_sample():
    assert fq_fraction(2, 5, samples=2000, seed=1).successes != fq_fraction(2, 5, samples=2000, seed=2).successes


def test_exhaustive_cap():
    with pytest.raises(ResourceCapExceeded):
        fq_exact_count(2, 5, cap=1000)


def test_bad_parameters():
    with pytest.raises(ValueError):
        fq_fraction(2, 4)
    with pytest.raises(ValueError):
        coprimality_product(1)


def _brute_factor(p):
    # residues of 8 integers mod p with at most one divisible by p
    good = (p - 1) ** 8 + 8 * (p - 1) ** 7
    return Fraction(good, p**8)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_coprimality_factor(p):
    assert coprimality_factor(p) == _brute_factor(p)


def test_product_small_cutoffs():
    assert coprimality_product(2).product == Fraction(9, 256)
    vals = [coprimality_product(P).product for P in (2, 3, 5, 7, 11, 13)]
    assert all(0 < b < a for a, b in zip(vals, vals[1:]))


@given(st.integers(2, 60))
def test_product_in_unit_interval(P):
    assert 0 < coprimality_product(P).product < 1


def test_sweep_and_csv():
    rows = fq_sweep([2], [2, 5], samples=500, seed=3)
    assert rows[0].exact and not rows[1].exact
    text = to_csv(rows)
    assert text.splitlines()[0].startswith("experiment,params,estimate,half_width")
    assert len(text.splitlines()) == 3


@pytest.mark.parametrize("q", [2, 3])
def test_exact_fraction_closed_form(q):
    # two random 2x2 matrices over F_q generate M_2(F_q) with probability (1 - 1/q)(1 - 1/q^2)
    r = fq_fraction(2, q, "exhaustive")
    assert Fraction(r.exact_value) == (1 - Fraction(1, q)) * (1 - Fraction(1, q * q))
