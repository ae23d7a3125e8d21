"""
Standard-normal density, tails and truncated moments

Closed forms are written in terms of pdf and complementary-CDF values so
that tail probabilities never go through 1 - CDF. Every function accepts
floats or numpy arrays; 0-d results come back as Python floats.
"""
import math
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy import integrate, special

ArrayLike = Union[float, np.ndarray]

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Infinite quadrature limits are truncated here; N(0,1) mass beyond is < 1e-300
QUADRATURE_CUTOFF = 40.0
DEFAULT_SUBDIVISION_CAP = 500


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance"""


class Interval(NamedTuple):
    lo: float
    hi: float

    def validate(self) -> "Interval":
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"interval requires lo <= hi, got [{self.lo}, {self.hi}]")
        return self


FULL_LINE = Interval(-math.inf, math.inf)


def _out(value: np.ndarray) -> ArrayLike:
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def std_normal_pdf(s: ArrayLike) -> ArrayLike:
    """(1/sqrt(2 pi)) exp(-s^2/2); 0 at +-inf"""
    s = np.asarray(s, dtype=float)
    return _out(INV_SQRT_2PI * np.exp(-0.5 * s * s))


def upper_tail(s: ArrayLike) -> ArrayLike:
    """Pr(N(0,1) > s), evaluated as erfc(s/sqrt(2))/2"""
    s = np.asarray(s, dtype=float)
    return _out(0.5 * special.erfc(s / math.sqrt(2.0)))


def std_normal_cdf(s: ArrayLike) -> ArrayLike:
    s = np.asarray(s, dtype=float)
    return _out(special.ndtr(s))


def tail_prob(U: ArrayLike) -> ArrayLike:
    """
    Two-sided tail Pr(|N(0,1)| > U)

    Args:
        U: Nonnegative threshold(s); +inf allowed

    Returns:
        Probability in [0, 1], non-increasing in U

    Raises:
        ValueError: If any U < 0
    """
    U = np.asarray(U, dtype=float)
    if np.any(U < 0) or np.any(np.isnan(U)):
        raise ValueError("tail_prob requires U >= 0; fold the sign before calling")
    return _out(2.0 * np.asarray(upper_tail(U)))


def _mass(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Integral of the pdf over [a, b] using the tail on the far side of 0
    both_upper = a >= 0
    both_lower = b <= 0
    upper = 0.5 * special.erfc(a / math.sqrt(2.0)) - 0.5 * special.erfc(b / math.sqrt(2.0))
    lower = 0.5 * special.erfc(-b / math.sqrt(2.0)) - 0.5 * special.erfc(-a / math.sqrt(2.0))
    straddle = 1.0 - 0.5 * special.erfc(-a / math.sqrt(2.0)) - 0.5 * special.erfc(b / math.sqrt(2.0))
    return np.where(both_upper, upper, np.where(both_lower, lower, straddle))


def _s_pdf(s: np.ndarray) -> np.ndarray:
    # s * pdf(s), with the limit 0 at +-inf
    with np.errstate(invalid="ignore"):
        value = s * INV_SQRT_2PI * np.exp(-0.5 * s * s)
    return np.where(np.isfinite(s), value, 0.0)


def truncated_moment_arrays(l: int, lo: ArrayLike, hi: ArrayLike) -> np.ndarray:
    """Vectorised truncated_moment over broadcast endpoint arrays (lo <= hi assumed)"""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if l == 0:
        return _mass(lo, hi)
    if l == 1:
        return INV_SQRT_2PI * (np.exp(-0.5 * lo * lo) - np.exp(-0.5 * hi * hi))
    if l == 2:
        return _mass(lo, hi) + _s_pdf(lo) - _s_pdf(hi)
    raise ValueError(f"moment order must be 0, 1 or 2, got {l}")


def truncated_moment(l: int, iv: Interval) -> float:
    """
    Integral of s^l * pdf(s) over iv, in closed form

    Args:
        l: Moment order, one of 0, 1, 2
        iv: Integration interval, endpoints may be infinite

    Returns:
        The truncated moment
    """
    if l not in (0, 1, 2):
        raise ValueError(f"moment order must be 0, 1 or 2, got {l}")
    iv = Interval(*iv).validate()
    return float(truncated_moment_arrays(l, iv.lo, iv.hi))


def shifted_square_integral(L: ArrayLike, U: ArrayLike) -> ArrayLike:
    """
    Integral of (s - L)^2 * pdf(s) over [L, U]

    Expanded as M2 - 2 L M1 + L^2 M0 over [L, U]. Clipped at 0 so rounding
    never produces a negative energy.

    Raises:
        ValueError: If L < 0 or L > U anywhere
    """
    L = np.asarray(L, dtype=float)
    U = np.asarray(U, dtype=float)
    if np.any(L < 0):
        raise ValueError("shifted_square_integral requires L >= 0")
    if np.any(L > U):
        raise ValueError("shifted_square_integral requires L <= U")
    m0 = truncated_moment_arrays(0, L, U)
    m1 = truncated_moment_arrays(1, L, U)
    m2 = truncated_moment_arrays(2, L, U)
    value = m2 - 2.0 * L * m1 + L * L * m0
    return _out(np.where(L == U, 0.0, np.maximum(value, 0.0)))


def quadrature_oracle(
    f: Callable[[float], float],
    iv: Interval,
    tol: float = 1e-12,
    subdivision_cap: int = DEFAULT_SUBDIVISION_CAP
) -> float:
    """
    Independent adaptive-quadrature estimate used to check the closed forms

    Args:
        f: Integrand, continuous on iv
        iv: Interval; infinite ends are truncated at +-QUADRATURE_CUTOFF
        tol: Absolute error target
        subdivision_cap: Maximum number of QUADPACK subintervals

    Returns:
        Integral estimate

    Raises:
        QuadratureError: If QUADPACK reports anything but clean convergence
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    iv = Interval(*iv).validate()
    lo = max(iv.lo, -QUADRATURE_CUTOFF)
    hi = min(iv.hi, QUADRATURE_CUTOFF)
    if lo >= hi:
        return 0.0

    # Split at 0 when the interval straddles the peak of the density
    pieces = [(lo, 0.0), (0.0, hi)] if lo < 0.0 < hi else [(lo, hi)]
    total = 0.0
    for a, b in pieces:
        value, abserr, info, *rest = integrate.quad(
            f, a, b,
            epsabs=tol / len(pieces),
            epsrel=0.0,
            limit=subdivision_cap,
            full_output=1
        )
        # quad appends a message only when QUADPACK flags a problem
        if rest or abserr > tol:
            message = rest[0] if rest else "error estimate above tolerance"
            raise QuadratureError(
                f"quadrature on [{a}, {b}] did not converge (abserr={abserr:.3g}): {message}"
            )
        total += value
    return total
