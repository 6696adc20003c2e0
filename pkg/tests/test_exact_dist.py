import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from angelcage.exact_dist import (
    DisplacementPmf,
    StepDistribution,
    binom,
    cdf_within,
    pmf_convolve_oracle,
    pmf_exact,
    walk_count,
)


def enumerate_walks(c, l):
    """Endpoint counts by listing every walk; only for tiny (2c+1)**l."""
    return Counter(sum(w) for w in itertools.product(range(-c, c + 1), repeat=l))


@pytest.mark.parametrize(
    "c, l, k, expected",
    [(1, 1, 0, 1), (1, 2, 0, 3), (1, 2, 2, 1), (2, 3, 6, 1)],
)
def test_walk_count_examples(c, l, k, expected):
    assert walk_count(c, l, k) == expected
    assert enumerate_walks(c, l)[k] == expected


@pytest.mark.parametrize("c", range(0, 4))
@pytest.mark.parametrize("l", range(1, 6))
def test_walk_count_matches_enumeration(c, l):
    brute = enumerate_walks(c, l)
    for k in range(-c * l - 3, c * l + 4):
        assert walk_count(c, l, k) == brute.get(k, 0)


def test_binom_convention():
    assert binom(3, 5) == 0
    assert binom(-1, 0) == 0
    assert binom(-4, -2) == 0
    assert binom(4, -1) == 0
    assert binom(5, 2) == 10
    assert binom(0, 0) == 1


def test_pmf_exact_examples():
    pmf = pmf_exact(1, 2)
    assert dict(pmf.items()) == {
        -2: Fraction(1, 9), -1: Fraction(2, 9), 0: Fraction(3, 9),
        1: Fraction(2, 9), 2: Fraction(1, 9),
    }
    assert dict(pmf_exact(0, 5).items()) == {0: 1}
    assert dict(pmf_exact(3, 1).items()) == {j: Fraction(1, 7) for j in range(-3, 4)}


def test_pmf_zero_turns_is_point_mass():
    pmf = pmf_exact(2, 0)
    assert pmf.mass(0) == 1
    assert pmf.total() == 1
    with pytest.raises(ValueError):
        pmf_exact(1, -1)


def test_oracle_examples():
    assert pmf_convolve_oracle(1, 2) == pmf_exact(1, 2)
    assert pmf_convolve_oracle(2, 4) == pmf_exact(2, 4)
    assert dict(pmf_convolve_oracle(1, 1).items()) == {j: Fraction(1, 3) for j in (-1, 0, 1)}


def test_exact_pmf_of_large_walk_is_big_integer_exact():
    pmf = pmf_exact(3, 40)
    assert pmf.denominator == 7**40
    assert sum(pmf.counts.values()) == 7**40
    assert pmf == pmf_convolve_oracle(3, 40)


@pytest.mark.parametrize(
    "c, l, k, expected",
    [(1, 2, 1, Fraction(7, 9)), (1, 2, 2, Fraction(1)), (1, 2, 0, Fraction(1, 3))],
)
def test_cdf_within_examples(c, l, k, expected):
    assert cdf_within(c, l, k) == expected


def test_cdf_within_monotone_and_reaches_one():
    for c, l in [(1, 5), (2, 4), (3, 3)]:
        values = [cdf_within(c, l, k) for k in range(0, c * l + 3)]
        assert values == sorted(values)
        assert values[c * l] == 1
        assert values[-1] == 1
    with pytest.raises(ValueError):
        cdf_within(1, 2, -1)


def test_step_distribution_moments():
    for c in range(0, 6):
        step = StepDistribution(c)
        vals = list(step.values)
        mean = Fraction(sum(vals), len(vals))
        var = Fraction(sum(v * v for v in vals), len(vals)) - mean**2
        assert step.mean == mean == 0
        assert step.variance == var
        assert step.probability * len(vals) == 1
    with pytest.raises(ValueError):
        StepDistribution(-1)


def test_pmf_equality_ignores_zero_entries():
    a = DisplacementPmf(1, 1, {-1: 1, 0: 1, 1: 1})
    b = DisplacementPmf(1, 1, {-1: 1, 0: 1, 1: 1, 5: 0})
    assert a == b
    assert a != DisplacementPmf(1, 1, {-1: 1, 0: 2})


@settings(max_examples=60, deadline=None)
@given(c=st.integers(0, 5), l=st.integers(1, 9), k=st.integers(-60, 60))
def test_walk_count_symmetric_and_supported(c, l, k):
    w = walk_count(c, l, k)
    assert w == walk_count(c, l, -k)
    assert w >= 0
    if c >= 1:
        assert (w == 0) == (abs(k) > c * l)


@settings(max_examples=40, deadline=None)
@given(c=st.integers(0, 6), l=st.integers(1, 12))
def test_count_conservation(c, l):
    total = sum(walk_count(c, l, k) for k in range(-c * l, c * l + 1))
    assert total == (2 * c + 1) ** l
