"""
Closed-form bounds: hand values, the H(p) gap identity and exponent monotonicity
"""
import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st
from pydantic import ValidationError

from theory.bounds import (
    SourceModel,
    binary_entropy,
    binary_kl,
    binomial_exponent,
    gaussian_rd,
    lower_bound_trivial,
    scale_reduce,
    small_p_gap,
    source_bounds,
    upper_bound_1,
    upper_bound_2,
)

H01 = 0.4689955936


def test_gaussian_rd():
    assert gaussian_rd(0.25, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert gaussian_rd(0.1, 0.4) == pytest.approx(1.0, abs=1e-12)
    for sigma2 in (0.01, 1.0, 37.0):
        assert gaussian_rd(sigma2, sigma2) == 0.0
    assert gaussian_rd(5.0, 1.0) == 0.0


def test_gaussian_rd_rejects_nonpositive():
    with pytest.raises(ValueError):
        gaussian_rd(0.0, 1.0)
    with pytest.raises(ValueError):
        gaussian_rd(0.1, -1.0)


@given(st.floats(1e-3, 1.0), st.floats(1e-3, 1.0), st.floats(0.01, 100.0))
def test_gaussian_rd_is_convex(u1, u2, sigma2):
    D1, D2 = u1 * sigma2, u2 * sigma2
    chord = 0.5 * (gaussian_rd(D1, sigma2) + gaussian_rd(D2, sigma2))
    assert chord >= gaussian_rd(0.5 * (D1 + D2), sigma2) - 1e-12


def test_binary_entropy():
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.1) == pytest.approx(H01, abs=1e-9)
    with pytest.raises(ValueError):
        binary_entropy(1.5)


def test_binary_kl():
    assert binary_kl(0.3, 0.3) == pytest.approx(0.0, abs=1e-15)
    assert binary_kl(1.0, 0.1) == pytest.approx(math.log2(10.0), abs=1e-12)
    assert binary_kl(0.5, 0.1) == pytest.approx(0.7369656, abs=1e-7)
    with pytest.raises(ValueError):
        binary_kl(0.5, 0.0)


@pytest.mark.parametrize("p, sigma2, D, expected", [
    (0.1, 4.0, 0.4, (0.1, 0.1)),
    (0.1, 1.0, 0.05, (0.1, 0.05)),
    (0.2, 0.25, 0.01, (0.2, 0.04)),
])
def test_scale_reduce(p, sigma2, D, expected):
    assert scale_reduce(SourceModel(p=p, sigma2=sigma2), D) == pytest.approx(expected)


def test_source_model_validation():
    with pytest.raises(ValidationError):
        SourceModel(p=0.0)
    with pytest.raises(ValidationError):
        SourceModel(p=0.1, sigma2=0.0)


def test_simple_bounds():
    assert upper_bound_1(0.2, 0.1) == pytest.approx(H01, abs=1e-9)
    assert upper_bound_1(0.025, 0.1) == pytest.approx(0.5689956, abs=1e-7)
    assert upper_bound_1(0.01, 0.1) == pytest.approx(0.6350920, abs=1e-7)
    assert upper_bound_2(0.1, 0.1) == 0.0
    assert upper_bound_2(0.025, 0.1) == pytest.approx(1.0, abs=1e-12)
    assert upper_bound_2(0.05, 0.1) == pytest.approx(0.5, abs=1e-12)
    assert lower_bound_trivial(0.3, 0.1) == 0.0
    assert lower_bound_trivial(0.025, 0.1) == pytest.approx(0.1, abs=1e-12)
    assert lower_bound_trivial(0.01, 0.1) == pytest.approx(0.1660964, abs=1e-7)


def test_gap_is_binary_entropy_on_grid():
    D, p = np.meshgrid(np.geomspace(1e-5, 0.5, 10), np.linspace(0.01, 0.9, 10))
    gap = np.asarray(upper_bound_1(D, p)) - np.asarray(lower_bound_trivial(D, p))
    assert np.max(np.abs(gap - np.asarray(binary_entropy(p)))) < 1e-12


def test_source_bounds_match_normalised_bounds():
    scaled = source_bounds(SourceModel(p=0.1, sigma2=4.0), 0.1)
    assert scaled["ub1"] == pytest.approx(float(upper_bound_1(0.025, 0.1)), abs=1e-12)
    assert scaled["ub2"] == pytest.approx(1.0, abs=1e-12)
    assert scaled["lb_trivial"] == pytest.approx(0.1, abs=1e-12)


def test_binomial_exponent_values():
    assert binomial_exponent(0.0, 1.0, 0.1) == 0.0
    assert binomial_exponent(1.0, 0.0, 0.1) == pytest.approx(math.log2(10.0), abs=1e-12)
    assert binomial_exponent(3.0, 2.0, 0.1) == pytest.approx(5.0 * binary_kl(0.6, 0.1), abs=1e-12)


def test_binomial_exponent_rejects_bad_weights():
    with pytest.raises(ValueError):
        binomial_exponent(-1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        binomial_exponent(0.0, 0.0, 0.1)


def test_binomial_exponent_monotone_on_random_triples():
    rng = np.random.default_rng(11)
    u = rng.uniform(0.01, 10.0, 10_000)
    v = rng.uniform(0.01, 10.0, 10_000)
    p = rng.uniform(0.01, 0.5, 10_000)
    # Stay clearly above the ratio = p boundary where the exponent flattens to 0
    keep = u / (u + v) > 1.05 * p
    u, v, p = u[keep], v[keep], p[keep]
    step = 0.01 * (u + v)

    base = np.asarray(binomial_exponent(u, v, p))
    assert np.all(np.asarray(binomial_exponent(u + step, v, p)) > base)
    assert np.all(np.asarray(binomial_exponent(u, v + step, p)) < base)


@given(st.floats(min_value=1e-4, max_value=0.9999))
def test_small_p_gap_is_entropy_residual(p):
    assert small_p_gap(p) == pytest.approx(-(1.0 - p) * math.log2(1.0 - p), abs=1e-12)


def test_small_p_gap_tends_to_p_log2_e():
    p = 1e-4
    assert small_p_gap(p) == pytest.approx(p * math.log2(math.e), rel=1e-3)
