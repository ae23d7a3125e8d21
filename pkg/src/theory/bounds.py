"""
Closed-form rate-distortion quantities for Bernoulli-Gaussian sources

All rates are in bits (log base 2). Functions accept floats or numpy arrays.
"""
import math
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import special

ArrayLike = Union[float, np.ndarray]

LN2 = math.log(2.0)


class SourceModel(BaseModel):
    """Bernoulli(p) support times N(0, sigma2) values"""
    model_config = ConfigDict(frozen=True)

    p: float = Field(gt=0.0, lt=1.0)
    sigma2: float = Field(default=1.0, gt=0.0)


def _out(value: np.ndarray) -> ArrayLike:
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def _check_open_probability(p: np.ndarray, name: str = "p") -> None:
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError(f"{name} must lie in the open interval (0, 1)")


def _check_probability(q: np.ndarray, name: str) -> None:
    if np.any(~((q >= 0.0) & (q <= 1.0))):
        raise ValueError(f"{name} must lie in [0, 1]")


def gaussian_rd(D: ArrayLike, sigma2: ArrayLike) -> ArrayLike:
    """
    Rate-distortion function of N(0, sigma2) under squared error

    Returns:
        max(0, 1/2 log2(sigma2 / D)) in bits per symbol
    """
    D = np.asarray(D, dtype=float)
    sigma2 = np.asarray(sigma2, dtype=float)
    if np.any(~(D > 0)):
        raise ValueError("gaussian_rd requires D > 0")
    if np.any(~(sigma2 > 0)):
        raise ValueError("gaussian_rd requires sigma2 > 0")
    return _out(np.where(D < sigma2, 0.5 * np.log2(sigma2 / D), 0.0))


def binary_entropy(p: ArrayLike) -> ArrayLike:
    """H(p) in bits, with 0 log 0 = 0"""
    p = np.asarray(p, dtype=float)
    _check_probability(p, "p")
    return _out((special.entr(p) + special.entr(1.0 - p)) / LN2)


def _binary_kl(q: np.ndarray, p: np.ndarray) -> np.ndarray:
    # xlogy carries the explicit 0 * log(0) = 0 branch
    with np.errstate(divide="ignore", invalid="ignore"):
        value = special.xlogy(q, q / p) + special.xlogy(1.0 - q, (1.0 - q) / (1.0 - p))
    return np.maximum(value / LN2, 0.0)


def binary_kl(q: ArrayLike, p: ArrayLike) -> ArrayLike:
    """
    Binary KL divergence D(q || p) in bits

    Args:
        q: Probability in [0, 1]
        p: Reference probability in (0, 1)

    Returns:
        q log2(q/p) + (1-q) log2((1-q)/(1-p)), nonnegative
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    _check_probability(q, "q")
    _check_open_probability(p)
    return _out(_binary_kl(q, p))


def scale_reduce(model: SourceModel, D: float) -> Tuple[float, float]:
    """Map (D, Xi(p, sigma2)) to the equivalent point (D / sigma2, Xi(p, 1))"""
    if not D > 0:
        raise ValueError("scale_reduce requires D > 0")
    return model.p, D / model.sigma2


def upper_bound_1(D: ArrayLike, p: ArrayLike) -> ArrayLike:
    """Two-stage coder bound H(p) + p R(D, N(0, p))"""
    p = np.asarray(p, dtype=float)
    _check_open_probability(p)
    return _out(np.asarray(binary_entropy(p)) + p * np.asarray(gaussian_rd(D, p)))


def upper_bound_2(D: ArrayLike, p: ArrayLike) -> ArrayLike:
    """Gaussian-is-worst bound R(D, N(0, p))"""
    p = np.asarray(p, dtype=float)
    _check_open_probability(p)
    return gaussian_rd(D, p)


def lower_bound_trivial(D: ArrayLike, p: ArrayLike) -> ArrayLike:
    """Genie-aided support bound p R(D, N(0, p))"""
    p = np.asarray(p, dtype=float)
    _check_open_probability(p)
    return _out(p * np.asarray(gaussian_rd(D, p)))


def binomial_exponent_arrays(u: np.ndarray, v: np.ndarray, p: ArrayLike) -> np.ndarray:
    """
    (u+v) D(u/(u+v) || p) where u/(u+v) > p, else 0; 0 where u+v = 0

    Unchecked vectorised form shared with the minimax payoff.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    weight = u + v
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(weight > 0, u / weight, 0.0)
    ratio = np.clip(ratio, 0.0, 1.0)
    exponent = weight * _binary_kl(ratio, np.asarray(p, dtype=float))
    return np.where((weight > 0) & (ratio > p), exponent, 0.0)


def binomial_exponent(u: ArrayLike, v: ArrayLike, p: ArrayLike) -> ArrayLike:
    """
    Large-deviation exponent of a Binomial(u+v, p) count reaching u

    Args:
        u: Nonnegative (real) success weight
        v: Nonnegative (real) failure weight
        p: Bernoulli parameter in (0, 1)

    Returns:
        (u+v) D(u/(u+v) || p) in bits when u/(u+v) > p, else 0

    Raises:
        ValueError: If u or v is negative or u + v == 0
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any(u < 0) or np.any(v < 0):
        raise ValueError("binomial_exponent requires u >= 0 and v >= 0")
    if np.any(u + v <= 0):
        raise ValueError("binomial_exponent requires u + v > 0")
    _check_open_probability(p)
    return _out(binomial_exponent_arrays(u, v, p))


def source_bounds(model: SourceModel, D: float) -> dict:
    """The three simple bounds at distortion D in the model's own units"""
    p, d = scale_reduce(model, D)
    return {
        "ub1": float(upper_bound_1(d, p)),
        "ub2": float(upper_bound_2(d, p)),
        "lb_trivial": float(lower_bound_trivial(d, p)),
    }


def small_p_gap(p: float) -> float:
    """H(p) - p log2(1/p): what remains of the H(p) gap once the improvement saturates"""
    return float(binary_entropy(p)) - p * math.log2(1.0 / p)
