"""
Max-min game: budget and payoff values, the inner minimisation against the
exhaustive oracle, and the asymptote, monotonicity and ordering of R_i
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from theory.bounds import binary_entropy, binomial_exponent, upper_bound_1
from theory.minimax import (
    GamePoint,
    MinimaxConfig,
    bound_set,
    brute_force_inner_min,
    distortion_budget_T1,
    improved_lower_bound,
    improvement_ri,
    inner_min,
    payoff_h,
)
from theory.special_functions import Interval, quadrature_oracle, shifted_square_integral, std_normal_pdf, tail_prob


def test_game_point_validation():
    with pytest.raises(ValidationError):
        GamePoint(L=1.0, U=0.5, r=0.0)
    with pytest.raises(ValidationError):
        GamePoint(L=-0.1, U=0.5, r=0.0)
    with pytest.raises(ValueError):
        distortion_budget_T1(GamePoint(L=0.5, U=1.0, r=0.95), 0.1)


def test_budget_values():
    assert distortion_budget_T1(GamePoint(L=0.7, U=0.7, r=0.0), 0.2) == 0.0
    assert distortion_budget_T1(GamePoint(L=0.0, U=math.inf, r=0.4), 0.1) == pytest.approx(0.1, abs=1e-14)

    oracle = quadrature_oracle(lambda s: (s - 0.5) ** 2 * std_normal_pdf(s), Interval(0.5, 2.0))
    expected = 0.3 * 0.25 + 0.2 * oracle
    assert distortion_budget_T1(GamePoint(L=0.5, U=2.0, r=0.3), 0.1) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.075 + 0.2 * shifted_square_integral(0.5, 2.0), abs=1e-12)


def test_payoff_values():
    p = 0.1
    assert payoff_h(GamePoint(L=0.5, U=1.0, r=0.0), p) == pytest.approx(
        p * tail_prob(1.0) * math.log2(1.0 / p), abs=1e-12
    )
    assert payoff_h(GamePoint(L=0.0, U=0.0, r=1.0 - p), p) == pytest.approx(0.0, abs=1e-12)
    assert payoff_h(GamePoint(L=0.5, U=1.5, r=0.02), p) == pytest.approx(
        binomial_exponent(p * tail_prob(1.5), 0.02, p), abs=1e-14
    )


def test_payoff_non_increasing_in_r():
    rs = np.linspace(0.0, 0.9, 50)
    values = [payoff_h(GamePoint(L=0.4, U=1.1, r=float(r)), 0.1) for r in rs]
    assert np.all(np.diff(values) <= 1e-15)


def test_inner_min_at_zero_threshold():
    result = inner_min(0.0, 0.01, 0.1)
    assert result.value == 0.0
    assert result.r == pytest.approx(0.9)


def test_inner_min_is_zero_when_budget_covers_everything():
    L, p = 1.0, 0.1
    D = p + (1.0 - p) * L * L
    assert inner_min(L, D, p).value == pytest.approx(0.0, abs=1e-12)


def test_inner_min_matches_brute_force_reference_point():
    fast = inner_min(0.3, 0.01, 0.1)
    oracle = brute_force_inner_min(0.3, 0.01, 0.1)
    assert fast.value >= 0.0
    assert fast.value == pytest.approx(oracle.value, abs=1e-4)
    assert distortion_budget_T1(GamePoint(L=0.3, U=fast.U, r=fast.r), 0.1) <= 0.01 * (1 + 1e-9)


@pytest.mark.slow
def test_inner_min_matches_brute_force_on_random_triples():
    rng = np.random.default_rng(5)
    for _ in range(50):
        L = float(rng.uniform(0.2, 3.0))
        p = float(rng.uniform(0.02, 0.4))
        # Keep the r cap 1-p inactive so both searches see the same frontier
        D = float(rng.uniform(1e-4, 0.5 * (1.0 - p) * L * L))
        fast = inner_min(L, D, p)
        oracle = brute_force_inner_min(L, D, p)
        assert fast.value == pytest.approx(oracle.value, abs=1e-4), (L, D, p)


def test_minimax_config_validation():
    with pytest.raises(ValidationError):
        MinimaxConfig(L_max=9.0, U_max=8.0)
    with pytest.raises(ValidationError):
        MinimaxConfig(L_grid_points=1)
    doubled = MinimaxConfig().doubled()
    assert (doubled.L_grid_points, doubled.U_grid_points) == (800, 400)


def test_ri_vanishes_for_large_distortion():
    p = 0.1
    L_max = MinimaxConfig().resolved_L_max(20.0)
    D = p + (1.0 - p) * L_max ** 2
    result = improvement_ri(D, p)
    assert result.ri == pytest.approx(0.0, abs=1e-12)
    assert improved_lower_bound(0.2, p) == pytest.approx(0.0, abs=1e-12)


def test_ri_rejects_bad_inputs():
    with pytest.raises(ValueError):
        improvement_ri(0.0, 0.1)
    with pytest.raises(ValueError):
        improvement_ri(0.01, 1.0)


def test_ri_result_is_consistent():
    result = improvement_ri(0.01, 0.1)
    assert 0.0 <= result.ri <= binary_entropy(0.1)
    assert result.witness.L > 0.0
    assert result.ri == pytest.approx(inner_min(result.witness.L, 0.01, 0.1).value, abs=1e-4)


@pytest.mark.parametrize("p", [0.01, 0.05, 0.1, 0.25])
def test_ri_tends_to_p_log2_inverse_p(p):
    assert improvement_ri(1e-9, p).ri == pytest.approx(p * math.log2(1.0 / p), abs=0.02)


@pytest.mark.parametrize("p", [0.01, 0.05, 0.1, 0.25])
def test_gap_to_first_upper_bound_closes_at_small_distortion(p):
    D = 1e-9
    gap = float(upper_bound_1(D, p)) - improved_lower_bound(D, p)
    assert gap <= binary_entropy(p) - p * math.log2(1.0 / p) + 0.02


def test_ri_near_asymptote_at_moderate_distortion_for_small_p():
    assert improvement_ri(1e-6, 0.01).ri == pytest.approx(0.01 * math.log2(100.0), abs=0.02)


@pytest.mark.slow
def test_ri_non_increasing_in_distortion():
    values = [improvement_ri(float(D), 0.1).ri for D in np.geomspace(1e-6, 0.1, 60)]
    assert np.all(np.diff(values) <= 1e-5)


def test_bound_set_at_boundary():
    bs = bound_set(0.1, 0.1)
    assert bs.ub2 == 0.0
    assert bs.lb_trivial == 0.0
    assert bs.ri >= 0.0
    assert bs.ub1 == pytest.approx(binary_entropy(0.1), abs=1e-12)
    assert bs.gap == pytest.approx(min(bs.ub1, bs.ub2) - bs.lb_improved)


def test_bound_set_ordering_point():
    bs = bound_set(0.05, 0.1)
    assert bs.ub2 == pytest.approx(0.5, abs=1e-12)
    assert bs.lb_improved <= bs.ub2 + 1e-9
    assert bs.lb_improved >= bs.lb_trivial


@pytest.mark.slow
def test_bound_ordering_over_sweep():
    for D in np.linspace(0.005, 0.1, 40):
        bs = bound_set(float(D), 0.1)
        assert bs.lb_trivial <= bs.lb_improved <= min(bs.ub1, bs.ub2) + 1e-9
        assert bs.ub1 == pytest.approx(upper_bound_1(float(D), 0.1))
