"""
HTTP query surface for serverless deployment

Read-only JSON endpoints over the same library calls as scripts/bgrd.py.
"""
import sys
from pathlib import Path
from typing import List, Literal

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from mangum import Mangum

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

from automation.sweep_runner import SweepSpec, bounds_row, run_sweep  # type: ignore
from config.settings import Settings  # type: ignore
from theory.bounds import SourceModel, scale_reduce  # type: ignore
from theory.minimax import BoundSet, MinimaxConfig, MinimaxResult, bound_set, improvement_ri  # type: ignore
from utils.logger import FAIL, get_logger  # type: ignore

logger = get_logger("api")

MAX_SWEEP_POINTS = 200

app = FastAPI(title="Bernoulli-Gaussian Rate-Distortion API")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET"],
    allow_headers=["*"],
)

# Settings are resolved lazily so a bad .env only fails the requests that need it
_minimax_config = None


def get_minimax_config() -> MinimaxConfig:
    global _minimax_config
    if _minimax_config is None:
        _minimax_config = MinimaxConfig(**Settings().minimax_overrides())
    return _minimax_config


def _raise_for(e: Exception) -> None:
    if isinstance(e, ValueError):
        raise HTTPException(status_code=422, detail=str(e))
    logger.error(f"{FAIL} {e}")
    raise HTTPException(status_code=500, detail=str(e))


@app.get("/api/health")
async def health():
    return {"status": "ok"}


@app.get("/api/bounds", response_model=BoundSet)
async def get_bounds(
    D: float = Query(..., gt=0.0),
    p: float = Query(..., gt=0.0, lt=1.0),
    sigma2: float = Query(1.0, gt=0.0)
):
    """All four bounds at one point, after reducing to unit variance"""
    try:
        _, D_norm = scale_reduce(SourceModel(p=p, sigma2=sigma2), D)
        return bound_set(D_norm, p, get_minimax_config())
    except (ValueError, RuntimeError) as e:
        _raise_for(e)


@app.get("/api/ri", response_model=MinimaxResult)
async def get_ri(
    D: float = Query(..., gt=0.0),
    p: float = Query(..., gt=0.0, lt=1.0)
):
    try:
        return improvement_ri(D, p, get_minimax_config())
    except (ValueError, RuntimeError) as e:
        _raise_for(e)


@app.get("/api/sweep")
async def get_sweep(
    p: float = Query(..., gt=0.0, lt=1.0),
    d_min: float = Query(..., gt=0.0),
    d_max: float = Query(..., gt=0.0),
    points: int = Query(40, ge=1, le=MAX_SWEEP_POINTS),
    spacing: Literal["linear", "log"] = "linear",
    sigma2: float = Query(1.0, gt=0.0)
) -> List[dict]:
    """Bound rows over a distortion sweep, in sweep order"""
    try:
        spec = SweepSpec(
            p=p, sigma2=sigma2, d_min=d_min, d_max=d_max,
            points=points, spacing=spacing, cfg=get_minimax_config()
        )
        return run_sweep(spec, bounds_row, workers=1)
    except (ValueError, RuntimeError) as e:
        _raise_for(e)


handler = Mangum(app)
