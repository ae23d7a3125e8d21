"""
Distortion sweeps over the bound calculator

Rows are computed in worker processes when more than one worker is
configured; results always come back in input order.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Literal, Optional, Sequence, TypeVar

import numpy as np
from pydantic import BaseModel, Field, model_validator

from theory.bounds import SourceModel, scale_reduce
from theory.minimax import MinimaxConfig, bound_set, improvement_ri
from utils.logger import OK, STATS, get_logger

logger = get_logger("sweep")

T = TypeVar("T")
R = TypeVar("R")


class SweepSpec(BaseModel):
    p: float = Field(gt=0.0, lt=1.0)
    sigma2: float = Field(default=1.0, gt=0.0)
    d_min: float = Field(gt=0.0)
    d_max: float = Field(gt=0.0)
    points: int = Field(ge=1)
    spacing: Literal["linear", "log"] = "linear"
    format: Literal["csv", "json"] = "csv"
    seed: int = Field(default=0, ge=0)
    cfg: MinimaxConfig = Field(default_factory=MinimaxConfig)

    @model_validator(mode="after")
    def _ordered_range(self) -> "SweepSpec":
        if self.d_min > self.d_max:
            raise ValueError(f"need d_min <= d_max, got {self.d_min} > {self.d_max}")
        return self

    def distortions(self) -> List[float]:
        if self.points == 1:
            return [self.d_min]
        if self.spacing == "log":
            grid = np.geomspace(self.d_min, self.d_max, self.points)
        else:
            grid = np.linspace(self.d_min, self.d_max, self.points)
        return [float(d) for d in grid]


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """map() over a process pool, results in input order"""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def bounds_row(args) -> Dict[str, object]:
    """One sweep row: bounds at the normalised distortion of D (module level for pickling)"""
    D, p, sigma2, cfg = args
    _, D_norm = scale_reduce(SourceModel(p=p, sigma2=sigma2), D)
    bs = bound_set(D_norm, p, cfg)
    return {
        "D": D,
        "D_normalized": D_norm,
        "p": p,
        "ub1": bs.ub1,
        "ub2": bs.ub2,
        "lb_trivial": bs.lb_trivial,
        "lb_improved": bs.lb_improved,
        "ri": bs.ri,
        "gap": bs.gap,
        "L": bs.game_point.L,
        "U": bs.game_point.U,
        "r": bs.game_point.r,
        "converged": bs.converged,
    }


def ri_row(args) -> Dict[str, object]:
    D, p, sigma2, cfg = args
    _, D_norm = scale_reduce(SourceModel(p=p, sigma2=sigma2), D)
    result = improvement_ri(D_norm, p, cfg)
    return {
        "D": D,
        "ri": result.ri,
        "reference": p * float(np.log2(1.0 / p)),
        "converged": result.converged,
    }


def run_sweep(spec: SweepSpec, row: Callable = bounds_row, workers: Optional[int] = None) -> List[Dict[str, object]]:
    """
    Evaluate row() at every distortion of the sweep

    Args:
        spec: Sweep parameters
        row: bounds_row or ri_row
        workers: Process count; 1 runs inline

    Returns:
        Rows in the order of spec.distortions()
    """
    distortions = spec.distortions()
    logger.info(f"{STATS} sweeping {len(distortions)} distortions at p={spec.p} ({spec.spacing} spacing)")
    rows = ordered_map(row, [(D, spec.p, spec.sigma2, spec.cfg) for D in distortions], workers or 1)
    logger.info(f"{OK} sweep complete")
    return rows
