"""
Improved lower bound on R(D, p) through a max-min game

The coding side picks a score threshold L; the adversary picks a tail
threshold U >= L and a false-support fraction r in [0, 1-p], paying
T1(L, U, r) = r L^2 + 2p * int_L^U (s-L)^2 pdf(s) ds out of the distortion
budget D. The payoff is the binomial large-deviation exponent
h(L, U, r) = (p Q(U) + r) D(p Q(U) / (p Q(U) + r) || p), Q the two-sided tail.

    R_i(D, p) = max_{L >= 0} min_{U, r feasible} h(L, U, r)
    R(D, p) >= p R(D, N(0, p)) + R_i(D, p)
"""
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from theory.bounds import (
    binary_entropy,
    binomial_exponent_arrays,
    lower_bound_trivial,
    upper_bound_1,
    upper_bound_2,
)
from theory.optimize import golden_section_batch
from theory.special_functions import shifted_square_integral, tail_prob
from utils.logger import RETRY, WARN, get_logger

logger = get_logger("minimax")

# Bisection steps for the largest affordable U; 8 / 2^64 is below double spacing
_BISECT_ITERS = 64
# Rows of the brute-force oracle evaluated per numpy batch
_BRUTE_CHUNK = 128
ORDERING_SLACK = 1e-9


class InfeasibleGameError(RuntimeError):
    """The adversary has no feasible (U, r) for the given L and D"""


class BoundOrderingError(RuntimeError):
    """A computed lower bound exceeds an upper bound"""


class GamePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    L: float = Field(ge=0.0)
    U: float
    r: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _ordered(self) -> "GamePoint":
        if self.U < self.L:
            raise ValueError(f"game point needs U >= L, got L={self.L}, U={self.U}")
        return self


class MinimaxConfig(BaseModel):
    """Grid and refinement settings for the max-min search"""
    model_config = ConfigDict(frozen=True)

    L_grid_points: int = Field(default=400, ge=2)
    U_grid_points: int = Field(default=200, ge=2)
    L_max: Optional[float] = Field(default=None, gt=0.0)
    U_max: float = Field(default=8.0, gt=0.0)
    refine_iters: int = Field(default=60, ge=2)
    tol: float = Field(default=1e-5, gt=0.0)

    @model_validator(mode="after")
    def _limits(self) -> "MinimaxConfig":
        if self.L_max is not None and self.L_max > self.U_max:
            raise ValueError(f"L_max ({self.L_max}) must not exceed U_max ({self.U_max})")
        return self

    def resolved_L_max(self, D: float) -> float:
        """Explicit L_max, else max(4, 4 sqrt(D)) capped at U_max"""
        if self.L_max is not None:
            return self.L_max
        return min(self.U_max, max(4.0, 4.0 * math.sqrt(D)))

    def doubled(self) -> "MinimaxConfig":
        return self.model_copy(update={
            "L_grid_points": 2 * self.L_grid_points,
            "U_grid_points": 2 * self.U_grid_points,
        })


class InnerMin(NamedTuple):
    value: float
    U: float
    r: float


class MinimaxResult(BaseModel):
    D: float
    p: float
    ri: float
    witness: GamePoint
    inner_value_at_witness_L: float
    converged: bool


class BoundSet(BaseModel):
    D: float
    p: float
    ub1: float
    ub2: float
    lb_trivial: float
    lb_improved: float
    ri: float
    game_point: GamePoint
    converged: bool
    gap: float


def _check_inputs(D: float, p: float) -> None:
    if not D > 0:
        raise ValueError(f"distortion D must be positive, got {D}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")


def _check_game_point(gp: GamePoint, p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if gp.r > 1.0 - p:
        raise ValueError(f"game point needs r <= 1-p = {1.0 - p}, got {gp.r}")


def _budget_arrays(L, U, r, p: float) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    return np.asarray(r, dtype=float) * L * L + 2.0 * p * np.asarray(shifted_square_integral(L, U))


def _payoff_arrays(U, r, p: float) -> np.ndarray:
    u = p * np.asarray(tail_prob(U))
    return binomial_exponent_arrays(u, r, p)


def _frontier_r(L: np.ndarray, U: np.ndarray, D: float, p: float) -> np.ndarray:
    # Largest r the remaining budget buys; unconstrained (-> 1-p) at L = 0
    spent = 2.0 * p * np.asarray(shifted_square_integral(L, U))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(L > 0, (D - spent) / (L * L), np.inf)
    return np.clip(r, 0.0, 1.0 - p)


def _feasible_U_max(L: np.ndarray, D: float, p: float, U_top: np.ndarray) -> np.ndarray:
    # Largest U with 2p * S(L, U) <= D (closed constraint), at most U_top
    capped = 2.0 * p * np.asarray(shifted_square_integral(L, U_top)) <= D
    lo = L.copy()
    hi = U_top.copy()
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        ok = 2.0 * p * np.asarray(shifted_square_integral(L, mid)) <= D
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return np.where(capped, U_top, lo)


def distortion_budget_T1(gp: GamePoint, p: float) -> float:
    """Adversary's distortion spend r L^2 + 2p int_L^U (s-L)^2 pdf(s) ds"""
    _check_game_point(gp, p)
    return float(_budget_arrays(gp.L, gp.U, gp.r, p))


def payoff_h(gp: GamePoint, p: float) -> float:
    """
    Game payoff h(L, U, r) in bits

    Equal to binomial_exponent(p * tail_prob(U), r, p); zero when the
    ratio p Q(U) / (p Q(U) + r) falls below p or the weight vanishes.
    """
    _check_game_point(gp, p)
    return float(_payoff_arrays(gp.U, gp.r, p))


def _inner_min_batch(
    L: np.ndarray,
    D: float,
    p: float,
    cfg: MinimaxConfig
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Adversary's best response for every L in the batch: (value, U, r)"""
    L = np.atleast_1d(np.asarray(L, dtype=float))
    rows = np.arange(L.size)
    U_top = np.maximum(cfg.U_max, L)
    U_hi = _feasible_U_max(L, D, p, U_top)

    # h is non-increasing in r, so the adversary spends the whole residual budget on r
    t = np.linspace(0.0, 1.0, cfg.U_grid_points)
    U_grid = L[:, None] + (U_hi - L)[:, None] * t[None, :]
    U_grid[:, -1] = U_hi
    r_grid = _frontier_r(L[:, None], U_grid, D, p)
    h = _payoff_arrays(U_grid, r_grid, p)

    if np.any(_budget_arrays(L, U_hi, np.zeros_like(L), p) > D * (1.0 + 1e-12)):
        raise InfeasibleGameError(f"no feasible (U, r) at D={D}")

    idx = np.argmin(h, axis=1)
    best = h[rows, idx]
    best_U = U_grid[rows, idx]
    best_r = r_grid[rows, idx]

    # A zero payoff anywhere on the frontier is already the minimum
    need = best > 0.0
    if np.any(need):
        sub = np.flatnonzero(need)
        last = cfg.U_grid_points - 1
        lo = U_grid[sub, np.maximum(idx[sub] - 1, 0)]
        hi = U_grid[sub, np.minimum(idx[sub] + 1, last)]
        L_sub = L[sub]

        def frontier_payoff(U: np.ndarray) -> np.ndarray:
            return _payoff_arrays(U, _frontier_r(L_sub, U, D, p), p)

        U_ref, h_ref = golden_section_batch(frontier_payoff, lo, hi, cfg.refine_iters)
        better = h_ref < best[sub]
        best[sub] = np.where(better, h_ref, best[sub])
        best_U[sub] = np.where(better, U_ref, best_U[sub])
        best_r[sub] = np.where(better, _frontier_r(L_sub, U_ref, D, p), best_r[sub])

    return best, best_U, best_r


def inner_min(L: float, D: float, p: float, cfg: Optional[MinimaxConfig] = None) -> InnerMin:
    """
    Adversary's minimum of h over the feasible (U, r) set for a fixed L

    Args:
        L: Score threshold, L >= 0
        D: Distortion budget (normalised units)
        p: Bernoulli parameter
        cfg: Search settings

    Returns:
        InnerMin(value, U, r) with the minimising point
    """
    cfg = cfg or MinimaxConfig()
    _check_inputs(D, p)
    if not L >= 0:
        raise ValueError(f"L must be nonnegative, got {L}")
    if L == 0.0:
        # r is free at L = 0, so r = 1-p pulls the ratio down to p
        return InnerMin(0.0, 0.0, 1.0 - p)
    value, U, r = _inner_min_batch(np.array([L]), D, p, cfg)
    return InnerMin(float(value[0]), float(U[0]), float(r[0]))


def brute_force_inner_min(
    L: float,
    D: float,
    p: float,
    U_points: int = 2000,
    r_points: int = 2000,
    U_max: float = 8.0
) -> InnerMin:
    """
    Exhaustive oracle for inner_min without the r-monotonicity shortcut

    U runs over a uniform grid of the affordable range [L, U_hi]; for each U,
    r runs over a uniform grid of the whole feasible range [0, r_max(U)],
    both ends included.
    """
    _check_inputs(D, p)
    if not L >= 0:
        raise ValueError(f"L must be nonnegative, got {L}")
    L_arr = np.array([float(L)])
    U_hi = float(_feasible_U_max(L_arr, D, p, np.maximum(U_max, L_arr))[0])
    U = np.linspace(L, U_hi, U_points)
    U[-1] = U_hi
    r_max = _frontier_r(np.full_like(U, L), U, D, p)
    fractions = np.linspace(0.0, 1.0, r_points)

    best = InnerMin(math.inf, L, 0.0)
    for start in range(0, U_points, _BRUTE_CHUNK):
        U_chunk = U[start:start + _BRUTE_CHUNK, None]
        r_chunk = r_max[start:start + _BRUTE_CHUNK, None] * fractions[None, :]
        h = _payoff_arrays(U_chunk, r_chunk, p)
        feasible = _budget_arrays(L, U_chunk, r_chunk, p) <= D * (1.0 + 1e-12)
        h = np.where(feasible, h, np.inf)
        flat = int(np.argmin(h))
        i, j = divmod(flat, r_points)
        if h[i, j] < best.value:
            best = InnerMin(float(h[i, j]), float(U_chunk[i, 0]), float(r_chunk[i, j]))
    return best


class _Search(NamedTuple):
    value: float
    grid_value: float
    L: float
    U: float
    r: float


def _search(D: float, p: float, cfg: MinimaxConfig) -> _Search:
    L_grid = np.linspace(0.0, cfg.resolved_L_max(D), cfg.L_grid_points)
    values, Us, rs = _inner_min_batch(L_grid, D, p, cfg)
    # L = 0 is the free-r corner: value 0, witness U = 0, r = 1-p
    values[0], Us[0], rs[0] = 0.0, 0.0, 1.0 - p

    j = int(np.argmax(values))
    grid_value = float(values[j])
    if grid_value <= 0.0:
        return _Search(0.0, 0.0, 0.0, 0.0, 1.0 - p)

    lo = L_grid[max(j - 1, 0)]
    hi = L_grid[min(j + 1, cfg.L_grid_points - 1)]

    def outer(L: np.ndarray) -> np.ndarray:
        return _inner_min_batch(L, D, p, cfg)[0]

    L_ref, v_ref = golden_section_batch(outer, [lo], [hi], cfg.refine_iters, maximize=True)
    if v_ref[0] > grid_value:
        L_star = float(L_ref[0])
        v, U, r = _inner_min_batch(np.array([L_star]), D, p, cfg)
        return _Search(float(v[0]), grid_value, L_star, float(U[0]), float(r[0]))
    return _Search(grid_value, grid_value, float(L_grid[j]), float(Us[j]), float(rs[j]))


def improvement_ri(D: float, p: float, cfg: Optional[MinimaxConfig] = None) -> MinimaxResult:
    """
    R_i(D, p): coarse grid over L, golden-section refinement of the best cell

    If refinement moves the optimum by more than cfg.tol the search is
    repeated once with doubled grids; converged reports whether the two
    runs agree to cfg.tol. Ties in L resolve toward the smaller L.
    """
    cfg = cfg or MinimaxConfig()
    _check_inputs(D, p)

    best = _search(D, p, cfg)
    converged = True
    if best.value - best.grid_value > cfg.tol:
        logger.debug(f"{RETRY} refinement moved R_i by {best.value - best.grid_value:.3g} at D={D:.4g}; doubling grids")
        second = _search(D, p, cfg.doubled())
        converged = abs(second.value - best.value) <= cfg.tol
        if second.value > best.value:
            best = second

    if not converged:
        logger.warning(f"{WARN} R_i search did not settle to tol={cfg.tol} at D={D:.4g}, p={p}")

    ri = max(best.value, 0.0)
    return MinimaxResult(
        D=D,
        p=p,
        ri=ri,
        witness=GamePoint(L=best.L, U=max(best.U, best.L), r=best.r),
        inner_value_at_witness_L=best.value,
        converged=converged
    )


def improved_lower_bound(D: float, p: float, cfg: Optional[MinimaxConfig] = None) -> float:
    """p R(D, N(0, p)) + R_i(D, p)"""
    return float(lower_bound_trivial(D, p)) + improvement_ri(D, p, cfg).ri


def bound_set(D: float, p: float, cfg: Optional[MinimaxConfig] = None) -> BoundSet:
    """
    All four bounds at one normalised (D, p) point

    Raises:
        BoundOrderingError: If the improved lower bound exceeds an upper bound
            or the improvement leaves [0, H(p)]
    """
    _check_inputs(D, p)
    result = improvement_ri(D, p, cfg)
    ub1 = float(upper_bound_1(D, p))
    ub2 = float(upper_bound_2(D, p))
    lb_trivial = float(lower_bound_trivial(D, p))
    lb_improved = lb_trivial + result.ri

    if lb_improved > min(ub1, ub2) + ORDERING_SLACK:
        raise BoundOrderingError(
            f"improved lower bound {lb_improved:.9g} exceeds min(ub1, ub2) = {min(ub1, ub2):.9g} at D={D}, p={p}"
        )
    if result.ri > float(binary_entropy(p)) + ORDERING_SLACK:
        raise BoundOrderingError(f"R_i = {result.ri:.9g} exceeds H(p) at D={D}, p={p}")

    return BoundSet(
        D=D,
        p=p,
        ub1=ub1,
        ub2=ub2,
        lb_trivial=lb_trivial,
        lb_improved=lb_improved,
        ri=result.ri,
        game_point=result.witness,
        converged=result.converged,
        gap=min(ub1, ub2) - lb_improved
    )
