"""
Strong typicality for Gaussian and Bernoulli sequences

A sequence s^n is eps-typical for N(0,1) when, for l = 0, 1, 2, the empirical
truncated moments (1/n) sum 1(s_i in [S, T)) s_i^l stay within eps of the
integrals of s^l pdf(s) over [S, T) for every S <= T. The supremum over the
continuum is taken on the quantized endpoint grid omega(j) = j * omega,
j = -K..K, plus -inf and +inf.

With D_l(w) = empirical minus theoretical mass of s^l below w, the deviation
on [w_i, w_j) is D_l(w_j) - D_l(w_i); the double-sided supremum is therefore
max D_l - min D_l over the grid, and the one-sided (T, inf) supremum is
max_j |D_l(inf) - D_l(w_j)|.
"""
from typing import Dict, List, Sequence

import numpy as np
from pydantic import BaseModel

from simulation.sampling import philox_stream, standard_normals
from theory.special_functions import Interval, truncated_moment_arrays
from utils.logger import STATS, get_logger

logger = get_logger("typicality")

MOMENTS = (0, 1, 2)
DEFAULT_K = 80
DEFAULT_OMEGA = 0.1


class TypicalityReport(BaseModel):
    n: int
    epsilon: float
    sup_deviation: Dict[int, float]
    one_sided_deviation: Dict[int, float]
    is_typical: bool
    endpoints_checked: int
    cell_bound: float


class ConcentrationRow(BaseModel):
    n: int
    epsilon: float
    trials: int
    fraction_typical: float
    seed: int


def _as_sequence(s) -> np.ndarray:
    s = np.asarray(s, dtype=float).ravel()
    if s.size == 0:
        raise ValueError("sequence must be non-empty")
    return s


def empirical_moment(s: Sequence[float], l: int, iv: Interval) -> float:
    """
    (1/n) sum_i 1(s_i in [lo, hi]) s_i^l

    Raises:
        ValueError: On an empty sequence or l outside {0, 1, 2}
    """
    if l not in MOMENTS:
        raise ValueError(f"moment order must be 0, 1 or 2, got {l}")
    s = _as_sequence(s)
    iv = Interval(*iv).validate()
    inside = (s >= iv.lo) & (s <= iv.hi)
    return float(np.sum(np.where(inside, s ** l, 0.0)) / s.size)


def _endpoint_grid(K: int, omega: float) -> np.ndarray:
    inner = np.arange(-K, K + 1, dtype=float) * omega
    return np.concatenate(([-np.inf], inner, [np.inf]))


def _cumulative_deviation(s: np.ndarray, grid: np.ndarray) -> Dict[int, np.ndarray]:
    # D_l(w) = (1/n) sum 1(s_i < w) s_i^l - int_{-inf}^{w} s^l pdf
    ordered = np.sort(s)
    below = np.searchsorted(ordered, grid, side="left")
    out = {}
    for l in MOMENTS:
        prefix = np.concatenate(([0.0], np.cumsum(ordered ** l)))
        empirical = prefix[below] / s.size
        theoretical = truncated_moment_arrays(l, np.full_like(grid, -np.inf), grid)
        out[l] = empirical - theoretical
    return out


def _cell_bound(grid: np.ndarray) -> float:
    return max(
        float(np.max(np.abs(truncated_moment_arrays(l, grid[:-1], grid[1:]))))
        for l in MOMENTS
    )


def one_sided_deviation(s: Sequence[float], K: int = DEFAULT_K, omega: float = DEFAULT_OMEGA) -> Dict[int, float]:
    """Per-l sup over grid T of |empirical - theoretical| s^l mass on (T, inf)"""
    s = _as_sequence(s)
    deviations = _cumulative_deviation(s, _endpoint_grid(K, omega))
    return {l: float(np.max(np.abs(d[-1] - d))) for l, d in deviations.items()}


def gaussian_typicality(
    s: Sequence[float],
    epsilon: float,
    K: int = DEFAULT_K,
    omega: float = DEFAULT_OMEGA
) -> TypicalityReport:
    """
    Check s against the eps-typical Gaussian set on the quantized grid

    Args:
        s: Sequence to test
        epsilon: Tolerance, compared strictly (deviation < epsilon)
        K: Grid half-width in cells
        omega: Cell width

    Returns:
        TypicalityReport with per-l double- and one-sided sup deviations
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if K < 1 or not omega > 0:
        raise ValueError("grid needs K >= 1 and omega > 0")
    s = _as_sequence(s)
    grid = _endpoint_grid(K, omega)
    deviations = _cumulative_deviation(s, grid)

    sup_deviation = {l: float(np.max(d) - np.min(d)) for l, d in deviations.items()}
    one_sided = {l: float(np.max(np.abs(d[-1] - d))) for l, d in deviations.items()}
    return TypicalityReport(
        n=int(s.size),
        epsilon=epsilon,
        sup_deviation=sup_deviation,
        one_sided_deviation=one_sided,
        is_typical=max(sup_deviation.values()) < epsilon,
        endpoints_checked=int(grid.size),
        cell_bound=_cell_bound(grid)
    )


def bernoulli_typicality(b: Sequence[int], p: float, epsilon: float) -> bool:
    """True iff |(#ones)/n - p| <= epsilon"""
    b = np.asarray(b).ravel()
    if b.size == 0:
        raise ValueError("sequence must be non-empty")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return bool(abs(np.count_nonzero(b) / b.size - p) <= epsilon)


def concentration_experiment(
    n_values: Sequence[int],
    epsilon: float,
    trials: int,
    seed: int,
    K: int = DEFAULT_K,
    omega: float = DEFAULT_OMEGA
) -> List[ConcentrationRow]:
    """
    Fraction of i.i.d. N(0,1) draws of each length that are eps-typical

    Trial t at length n draws from philox_stream(seed, n, t), so the table is
    a deterministic function of its arguments.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rows = []
    for n in n_values:
        if n < 1:
            raise ValueError(f"block length must be positive, got {n}")
        hits = 0
        for t in range(trials):
            s = standard_normals(philox_stream(seed, n, t), n)
            if gaussian_typicality(s, epsilon, K, omega).is_typical:
                hits += 1
        fraction = hits / trials
        logger.info(f"{STATS} n={n}: {hits}/{trials} typical at eps={epsilon}")
        rows.append(ConcentrationRow(
            n=int(n), epsilon=epsilon, trials=trials, fraction_typical=fraction, seed=seed
        ))
    return rows
