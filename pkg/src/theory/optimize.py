"""
Golden-section search over many brackets at once
"""
import math
from typing import Callable, Tuple

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_batch(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    iters: int,
    maximize: bool = False
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Run golden-section search independently on each bracket [lo_i, hi_i]

    Args:
        f: Vectorised objective, f(x)[i] evaluated for bracket i
        lo: Left ends
        hi: Right ends
        iters: Number of shrink steps (bracket width shrinks by 0.618 per step)
        maximize: Search for a maximum instead of a minimum

    Returns:
        (x_best, f_best) over the interior points and both bracket ends
    """
    sign = -1.0 if maximize else 1.0
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    a = lo.copy()
    b = hi.copy()

    def g(x: np.ndarray) -> np.ndarray:
        return sign * np.asarray(f(x), dtype=float)

    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = g(c)
    fd = g(d)

    for _ in range(iters):
        left = fc <= fd
        # Keep [a, d] where the left point wins, [c, b] otherwise
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, b - INV_PHI * (b - a), d)
        new_d = np.where(left, c, a + INV_PHI * (b - a))
        fresh = np.where(left, new_c, new_d)
        f_fresh = g(fresh)
        fc, fd = np.where(left, f_fresh, fd), np.where(left, fc, f_fresh)
        c, d = new_c, new_d

    # Compare interior points with the starting bracket ends so boundary optima are kept
    candidates = np.stack([c, d, lo, hi])
    values = np.stack([fc, fd, g(lo), g(hi)])
    pick = np.argmin(values, axis=0)
    cols = np.arange(candidates.shape[1])
    return candidates[pick, cols], sign * values[pick, cols]
