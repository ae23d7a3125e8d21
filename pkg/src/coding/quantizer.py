"""
Entropy-coded uniform scalar quantizer for N(0,1) values

Mid-tread cells [(i - 1/2) step, (i + 1/2) step) for i = -I..I, with the two
outer cells extended to +-inf when the quantizer is designed. Reconstruction
points are the N(0,1) centroids of the cells, so the design MSE is exactly
1 - sum_i P_i c_i^2, and the step is chosen by root-finding on that curve.
Cell indices are arithmetic-coded against the cell probabilities.
"""
import math
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import optimize

from coding.arithmetic import FrequencyTable, decode_symbols, encode_symbols
from theory.special_functions import truncated_moment_arrays

MIN_TARGET = 1e-6
# Finite cells cover +-COVERAGE standard deviations
COVERAGE = 8.0


class QuantizedValues(NamedTuple):
    bits: str
    reconstruction: np.ndarray
    clamped: int


class UniformQuantizer:
    """
    Args:
        step: Cell width; math.inf for the zero-rate quantizer
        levels: I, the largest cell index magnitude
    """

    def __init__(self, step: float, levels: int):
        self.step = step
        self.levels = levels
        if math.isinf(step) or levels == 0:
            self.step = math.inf
            self.levels = 0
            self.probabilities = np.array([1.0])
            self.centroids = np.array([0.0])
            self.table = None
            return

        idx = np.arange(-levels, levels + 1, dtype=float)
        lo = (idx - 0.5) * step
        hi = (idx + 0.5) * step
        lo[0] = -np.inf
        hi[-1] = np.inf
        mass = truncated_moment_arrays(0, lo, hi)
        first = truncated_moment_arrays(1, lo, hi)
        with np.errstate(invalid="ignore", divide="ignore"):
            centroids = np.where(mass > 0, first / mass, np.clip(idx * step, lo, hi))
        self.probabilities = mass
        self.centroids = centroids
        self.table = FrequencyTable(mass)

    @property
    def is_zero_rate(self) -> bool:
        return self.levels == 0

    @property
    def edge(self) -> float:
        """Outer edge of the finite cells"""
        return (self.levels + 0.5) * self.step

    def design_mse(self) -> float:
        return float(max(0.0, 1.0 - np.sum(self.probabilities * self.centroids ** 2)))

    def entropy(self) -> float:
        """Entropy of the cell index in bits, the ideal per-value rate"""
        p = self.probabilities[self.probabilities > 0]
        return float(-np.sum(p * np.log2(p)))

    def indices(self, values: Sequence[float]) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if self.is_zero_rate:
            return np.zeros(values.shape, dtype=np.int64)
        raw = np.floor(values / self.step + 0.5).astype(np.int64)
        return np.clip(raw, -self.levels, self.levels)

    def reconstruct(self, indices: np.ndarray) -> np.ndarray:
        return self.centroids[np.asarray(indices) + self.levels]

    def encode(self, values: Sequence[float]) -> QuantizedValues:
        values = np.asarray(values, dtype=float).ravel()
        indices = self.indices(values)
        reconstruction = self.reconstruct(indices)
        if self.is_zero_rate:
            return QuantizedValues("", reconstruction, 0)
        clamped = int(np.count_nonzero(np.abs(values) > self.edge))
        bits = encode_symbols(self.table, (indices + self.levels).tolist()) if values.size else ""
        return QuantizedValues(bits, reconstruction, clamped)

    def decode(self, bits: str, count: int) -> np.ndarray:
        if self.is_zero_rate or count == 0:
            return np.zeros(count)
        symbols = np.asarray(decode_symbols(self.table, bits, count), dtype=np.int64)
        return self.centroids[symbols]


def _levels_for(step: float) -> int:
    return max(1, math.ceil(COVERAGE / step))


@lru_cache(maxsize=64)
def design_quantizer(target_D_per_value: float, levels: Optional[int] = None) -> UniformQuantizer:
    """
    Uniform quantizer whose N(0,1) centroid MSE equals the target

    Args:
        target_D_per_value: Mean squared error wanted per value
        levels: Fixed I; derived from the step when None

    Returns:
        UniformQuantizer; the zero-rate quantizer when the target is >= 1

    Raises:
        ValueError: If the target is below 1e-6 or not positive
    """
    if not target_D_per_value > 0:
        raise ValueError(f"target distortion must be positive, got {target_D_per_value}")
    if target_D_per_value < MIN_TARGET:
        raise ValueError(f"target distortion {target_D_per_value} below the supported minimum {MIN_TARGET}")
    if levels is not None and levels < 1:
        raise ValueError(f"quantizer levels must be at least 1, got {levels}")
    if target_D_per_value >= 1.0:
        return UniformQuantizer(math.inf, 0)

    def excess(step: float) -> float:
        I = levels if levels is not None else _levels_for(step)
        return UniformQuantizer(step, I).design_mse() - target_D_per_value

    lo = 0.5 * math.sqrt(12.0 * target_D_per_value)
    hi = 2.0 * COVERAGE * 10.0
    if excess(lo) > 0:
        # Only reachable with a small fixed level count that cannot cover the target
        raise ValueError(f"{levels} levels cannot reach distortion {target_D_per_value}")
    if excess(hi) < 0:
        return UniformQuantizer(math.inf, 0)
    step = optimize.brentq(excess, lo, hi, xtol=1e-12, rtol=1e-10)
    return UniformQuantizer(step, levels if levels is not None else _levels_for(step))


def quantize_values(values: Sequence[float], target_D_per_value: float) -> QuantizedValues:
    """Quantize and entropy-code values at the given per-value MSE target"""
    return design_quantizer(float(target_D_per_value)).encode(values)
