"""
Typicality checkers and the concentration experiment
"""
import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from simulation.sampling import bernoulli_bits, philox_stream, standard_normals
from simulation.typicality import (
    bernoulli_typicality,
    concentration_experiment,
    empirical_moment,
    gaussian_typicality,
    one_sided_deviation,
)
from theory.special_functions import FULL_LINE, Interval, truncated_moment


def test_empirical_moment_examples():
    s = [1.0, -1.0, 2.0]
    assert empirical_moment(s, 0, FULL_LINE) == 1.0
    assert empirical_moment(s, 1, Interval(0.0, math.inf)) == pytest.approx(1.0)
    assert empirical_moment(s, 2, Interval(-math.inf, 0.0)) == pytest.approx(1.0 / 3.0)


def test_empirical_moment_rejects_empty_and_bad_order():
    with pytest.raises(ValueError):
        empirical_moment([], 0, FULL_LINE)
    with pytest.raises(ValueError):
        empirical_moment([1.0], 3, FULL_LINE)


@given(st.lists(st.floats(min_value=-5, max_value=5), min_size=1, max_size=50), st.floats(min_value=-5, max_value=5))
def test_empirical_moment_additive_over_adjacent_cells(values, cut):
    # Samples sitting exactly on the cut are counted by both closed intervals
    values = [v for v in values if v != cut] or [cut + 1.0]
    for l in (0, 1, 2):
        left = empirical_moment(values, l, Interval(-math.inf, cut))
        right = empirical_moment(values, l, Interval(cut, math.inf))
        assert left + right == pytest.approx(empirical_moment(values, l, FULL_LINE), abs=1e-12)


def test_tail_beyond_sample_is_pure_theoretical_mass():
    s = standard_normals(philox_stream(3), 1000)
    M = float(np.max(s)) + 0.5
    assert empirical_moment(s, 0, Interval(M, math.inf)) == 0.0
    assert truncated_moment(0, Interval(M, math.inf)) > 0.0


def test_constant_sequence_is_not_typical():
    report = gaussian_typicality(np.zeros(1000), 0.02)
    assert not report.is_typical
    assert report.sup_deviation[0] > 0.9


def test_report_fields():
    report = gaussian_typicality(standard_normals(philox_stream(1), 5000), 0.05, K=80, omega=0.1)
    assert report.endpoints_checked == 2 * 80 + 3
    assert report.is_typical == (max(report.sup_deviation.values()) < report.epsilon)
    assert 0.0 < report.cell_bound < 0.05


def test_gaussian_typicality_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        gaussian_typicality([0.1, 0.2], 0.0)


@pytest.mark.parametrize("seed", range(20))
def test_double_sided_within_twice_one_sided(seed):
    s = standard_normals(philox_stream(seed), 300)
    report = gaussian_typicality(s, 0.05)
    one_sided = one_sided_deviation(s)
    assert one_sided == report.one_sided_deviation
    for l in (0, 1, 2):
        assert report.sup_deviation[l] <= 2.0 * one_sided[l] + 1e-12


@pytest.mark.slow
def test_long_gaussian_sequences_are_typical():
    hits = sum(
        gaussian_typicality(standard_normals(philox_stream(100, seed), 100_000), 0.02).is_typical
        for seed in range(100)
    )
    assert hits >= 97


def test_bernoulli_typicality_examples():
    assert not bernoulli_typicality(np.ones(50), 0.1, 0.05)
    b = np.zeros(100)
    b[:10] = 1
    assert bernoulli_typicality(b, 0.1, 1e-9)
    with pytest.raises(ValueError):
        bernoulli_typicality([], 0.1, 0.05)


def test_bernoulli_typicality_frequency():
    hits = sum(
        bernoulli_typicality(bernoulli_bits(philox_stream(seed), 1000, 0.1), 0.1, 0.03)
        for seed in range(10_000)
    )
    assert hits / 10_000 >= 0.99


def test_concentration_trivial_extremes():
    assert concentration_experiment([10, 100], 10.0, 20, seed=1)[0].fraction_typical == 1.0
    assert concentration_experiment([1], 0.01, 50, seed=1)[0].fraction_typical == 0.0


def test_concentration_is_deterministic():
    first = concentration_experiment([50, 200], 0.1, 10, seed=7)
    second = concentration_experiment([50, 200], 0.1, 10, seed=7)
    assert [r.model_dump() for r in first] == [r.model_dump() for r in second]


@pytest.mark.slow
def test_concentration_grows_with_length():
    trials = 200
    rows = concentration_experiment([100, 1000, 10_000], 0.05, trials, seed=7)
    fractions = [r.fraction_typical for r in rows]
    slack = 2.0 / math.sqrt(trials)
    assert all(b >= a - slack for a, b in zip(fractions, fractions[1:]))
