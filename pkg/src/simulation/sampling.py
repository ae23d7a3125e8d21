"""
Reproducible random streams

Every stream is a Philox (counter-based) generator keyed by a tuple of
integers such as (seed, trial_index), so trials can run in any order or in
parallel and still draw identical numbers. Gaussians come from the inverse
CDF of the uniforms rather than from a library normal sampler.
"""
from typing import Tuple

import numpy as np
from scipy import special

_MANTISSA = 2 ** 53


def philox_stream(*keys: int) -> np.random.Generator:
    """Generator for the integer key path, e.g. philox_stream(seed, block)"""
    if not keys:
        raise ValueError("philox_stream needs at least one key")
    if any(int(k) < 0 for k in keys):
        raise ValueError("stream keys must be nonnegative integers")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in keys])))


def open_uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniforms strictly inside (0, 1) on the 2^-53 lattice"""
    return (rng.integers(0, _MANTISSA, size=n, dtype=np.int64) + 0.5) / _MANTISSA


def standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    return special.ndtri(open_uniforms(rng, n))


def bernoulli_bits(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    return open_uniforms(rng, n) < p


def bernoulli_gaussian(rng: np.random.Generator, n: int, p: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Support b, Gaussian values s and the product x = b * s"""
    b = bernoulli_bits(rng, n, p)
    s = standard_normals(rng, n)
    return b, s, np.where(b, s, 0.0)
