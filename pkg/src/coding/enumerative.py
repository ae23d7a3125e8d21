"""
Fixed-length enumerative coding of binary sequences in a typical shell

The shell is every b^n whose weight k satisfies |k/n - p| <= eps. A sequence
is indexed by offset(k) + rank, where offset(k) counts the shell sequences of
smaller weight and rank is the colex rank of its support among the C(n, k)
arrangements. Indices are written big-endian at a fixed width of
ceil(log2(shell size)) bits. Binomials are exact Python integers.
"""
import math
from bisect import bisect_right
from typing import List, Optional, Sequence

import numpy as np


def colex_rank(positions: Sequence[int]) -> int:
    """Rank of a sorted support among all k-subsets: sum_j C(c_j, j)"""
    return sum(math.comb(c, j) for j, c in enumerate(positions, start=1))


def colex_unrank(rank: int, n: int, k: int) -> List[int]:
    """
    Inverse of colex_rank for k-subsets of range(n)

    Walks c downward from n-1 and updates C(c, j) by exact integer ratios,
    so each step is one multiply and one divide.
    """
    if k == 0:
        if rank != 0:
            raise ValueError("rank out of range for k = 0")
        return []
    positions = []
    c = n - 1
    binom = math.comb(c, k)
    for j in range(k, 0, -1):
        # Largest c with C(c, j) <= rank
        while binom > rank:
            binom = binom * (c - j) // c
            c -= 1
        positions.append(c)
        rank -= binom
        if j > 1:
            # C(c-1, j-1) = C(c, j) * j / c
            binom = binom * j // c if c > 0 else 0
            c -= 1
    if rank != 0:
        raise ValueError("rank out of range for the given n and k")
    positions.reverse()
    return positions


class TypicalShellCoder:
    """
    Shell coder for length-n support sequences

    Args:
        n: Block length
        p: Bernoulli parameter the shell is centred on
        epsilon: Shell half-width in weight fraction
    """

    def __init__(self, n: int, p: float, epsilon: float):
        if n < 1:
            raise ValueError(f"block length must be positive, got {n}")
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
        if not epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        self.n = n
        self.p = p
        self.epsilon = epsilon

        self.weights = [k for k in range(n + 1) if abs(k / n - p) <= epsilon]
        self.offsets: List[int] = []
        total = 0
        if self.weights:
            k0 = self.weights[0]
            binom = math.comb(n, k0)
            for k in self.weights:
                if k != k0:
                    binom = binom * (n - k + 1) // k
                self.offsets.append(total)
                total += binom
        self.size = total
        self.width = (total - 1).bit_length() if total > 1 else 0

    @property
    def bits_per_block(self) -> int:
        """Escape flag plus the fixed-width shell index"""
        return 1 + self.width

    def contains(self, b: Sequence[int]) -> bool:
        k = int(np.count_nonzero(b))
        return abs(k / self.n - self.p) <= self.epsilon

    def index(self, b: Sequence[int]) -> Optional[int]:
        """Shell index of b, or None when b is outside the shell"""
        b = np.asarray(b).ravel()
        if b.size != self.n:
            raise ValueError(f"expected a length-{self.n} sequence, got {b.size}")
        if not self.contains(b):
            return None
        positions = np.flatnonzero(b).tolist()
        k = len(positions)
        slot = self.weights.index(k)
        return self.offsets[slot] + colex_rank(positions)

    def sequence(self, index: int) -> np.ndarray:
        if not 0 <= index < self.size:
            raise ValueError(f"shell index {index} out of range [0, {self.size})")
        slot = bisect_right(self.offsets, index) - 1
        k = self.weights[slot]
        b = np.zeros(self.n, dtype=bool)
        b[colex_unrank(index - self.offsets[slot], self.n, k)] = True
        return b

    def encode(self, b: Sequence[int]) -> str:
        """
        Escape flag then fixed-width index; atypical b gives '1' + all zeros

        Returns:
            Bitstring of length bits_per_block
        """
        index = self.index(b)
        if index is None:
            return "1" + "0" * self.width
        body = format(index, f"0{self.width}b") if self.width else ""
        return "0" + body

    def decode(self, bits: str) -> Optional[np.ndarray]:
        """Recover b from encode() output; None on the escape codeword"""
        if len(bits) < self.bits_per_block:
            raise ValueError("bitstring shorter than one support codeword")
        if bits[0] == "1":
            return None
        body = bits[1:self.bits_per_block]
        return self.sequence(int(body, 2) if body else 0)
