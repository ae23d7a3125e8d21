"""
Two-stage block codec for the Bernoulli-Gaussian source

Stage one sends the support b^n losslessly with the typical-shell coder
(or an escape codeword when b^n falls outside the shell). Stage two
quantizes the 1(b^n) nonzero values at per-value distortion target_D / p
with the entropy-coded uniform quantizer. The decoder places the value
reconstructions on the decoded support; escape blocks decode to all zeros.

Block bitstream: [escape bit][shell index, fixed width][value payload]
"""
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from coding.enumerative import TypicalShellCoder
from coding.quantizer import QuantizedValues, UniformQuantizer, design_quantizer
from coding.quantizer import quantize_values as _quantize_values
from simulation.sampling import bernoulli_gaussian, philox_stream
from utils.logger import OK, STATS, WARN, get_logger

logger = get_logger("codec")


class SupportDecodeError(RuntimeError):
    """Decoded support differs from the encoded one on a non-escape block"""


class CodecConfig(BaseModel):
    n: int = Field(ge=1)
    p: float = Field(gt=0.0, lt=1.0)
    target_D: float = Field(gt=0.0)
    epsilon1: float = Field(default=0.01, gt=0.0)
    quantizer_levels: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)


class CodecReport(BaseModel):
    n: int
    blocks: int
    target_D: float
    empirical_rate: float
    empirical_distortion: float
    support_bits: float
    value_bits: float
    atypical_flag_count: int
    escape_distortion: float
    clamped_count: int
    seed: int


class EncodedBlock(NamedTuple):
    bits: str
    support_bits: int
    value_bits: int
    escaped: bool
    clamped: int


@lru_cache(maxsize=16)
def _shell_coder(n: int, p: float, epsilon1: float) -> TypicalShellCoder:
    return TypicalShellCoder(n, p, epsilon1)


def sample_source(n: int, p: float, seed: int, *stream: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Draw (b, s, x = b * s) of length n

    Args:
        n: Block length
        p: Support probability
        seed: Base seed
        *stream: Extra stream keys, e.g. a block index

    Returns:
        Support bits, Gaussian values and the product sequence
    """
    if n < 1:
        raise ValueError(f"block length must be positive, got {n}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return bernoulli_gaussian(philox_stream(seed, *stream), n, p)


def encode_support(b: Sequence[int], p: float, epsilon1: float) -> str:
    """Fixed-length shell codeword for b; the escape codeword when b is atypical"""
    b = np.asarray(b).ravel()
    return _shell_coder(int(b.size), float(p), float(epsilon1)).encode(b)


def quantize_values(values: Sequence[float], target_D_per_value: float) -> Tuple[str, np.ndarray]:
    """Bitstring and centroid reconstruction of values at the per-value MSE target"""
    quantized: QuantizedValues = _quantize_values(values, target_D_per_value)
    return quantized.bits, quantized.reconstruction


class BlockCodec:
    """
    Encoder/decoder pair for one block length

    Args:
        n: Block length
        p: Support probability
        target_D: Distortion per source symbol
        epsilon1: Support shell half-width
        quantizer_levels: Fixed quantizer level count, derived when None
    """

    def __init__(
        self,
        n: int,
        p: float,
        target_D: float,
        epsilon1: float = 0.01,
        quantizer_levels: Optional[int] = None
    ):
        self.n = n
        self.p = p
        self.target_D = target_D
        self.shell = _shell_coder(n, float(p), float(epsilon1))
        self.quantizer: UniformQuantizer = design_quantizer(float(target_D / p), quantizer_levels)

    @classmethod
    def from_config(cls, cfg: CodecConfig) -> "BlockCodec":
        return cls(cfg.n, cfg.p, cfg.target_D, cfg.epsilon1, cfg.quantizer_levels)

    def encode_block(self, b: np.ndarray, s: np.ndarray) -> EncodedBlock:
        b = np.asarray(b, dtype=bool).ravel()
        s = np.asarray(s, dtype=float).ravel()
        if b.size != self.n or s.size != self.n:
            raise ValueError(f"expected length-{self.n} support and values")
        support = self.shell.encode(b)
        if support[0] == "1":
            return EncodedBlock(support, len(support), 0, True, 0)
        payload = self.quantizer.encode(s[b])
        return EncodedBlock(support + payload.bits, len(support), len(payload.bits), False, payload.clamped)

    def encode(self, b: np.ndarray, s: np.ndarray) -> str:
        return self.encode_block(b, s).bits

    def decode(self, bits: str) -> Tuple[Optional[np.ndarray], np.ndarray]:
        """
        Decode one block bitstream

        Returns:
            (support, reconstruction); support is None for an escape block
        """
        support = self.shell.decode(bits)
        xhat = np.zeros(self.n)
        if support is None:
            return None, xhat
        payload = bits[self.shell.bits_per_block:]
        xhat[support] = self.quantizer.decode(payload, int(np.count_nonzero(support)))
        return support, xhat


def run_codec(cfg: CodecConfig, blocks: int) -> CodecReport:
    """
    Encode and decode independent blocks and aggregate rate and distortion

    Block i draws from philox_stream(cfg.seed, i). Rates and bit counts are
    per-block averages; distortion is the mean of per-block (1/n) ||x - xhat||^2.

    Raises:
        ValueError: If blocks < 1
        SupportDecodeError: If a non-escape block does not round-trip its support
    """
    if blocks < 1:
        raise ValueError(f"blocks must be at least 1, got {blocks}")
    codec = BlockCodec.from_config(cfg)

    support_bits = 0
    value_bits = 0
    distortion = 0.0
    escape_distortion = 0.0
    escapes = 0
    clamped = 0
    for i in range(blocks):
        b, s, x = sample_source(cfg.n, cfg.p, cfg.seed, i)
        encoded = codec.encode_block(b, s)
        b_hat, xhat = codec.decode(encoded.bits)
        block_distortion = float(np.mean((x - xhat) ** 2))

        if encoded.escaped:
            escapes += 1
            escape_distortion += block_distortion
        elif not np.array_equal(b_hat, b):
            raise SupportDecodeError(f"support mismatch in block {i} (n={cfg.n}, seed={cfg.seed})")

        support_bits += encoded.support_bits
        value_bits += encoded.value_bits
        distortion += block_distortion
        clamped += encoded.clamped

    if escapes:
        logger.warning(f"{WARN} {escapes}/{blocks} blocks took the escape path")
    if clamped:
        logger.info(f"{STATS} {clamped} values fell beyond the outer quantizer cell")

    report = CodecReport(
        n=cfg.n,
        blocks=blocks,
        target_D=cfg.target_D,
        empirical_rate=(support_bits + value_bits) / (blocks * cfg.n),
        empirical_distortion=distortion / blocks,
        support_bits=support_bits / blocks,
        value_bits=value_bits / blocks,
        atypical_flag_count=escapes,
        escape_distortion=escape_distortion / blocks,
        clamped_count=clamped,
        seed=cfg.seed
    )
    logger.info(
        f"{OK} codec n={cfg.n} p={cfg.p}: rate {report.empirical_rate:.4f} bits, "
        f"distortion {report.empirical_distortion:.5f}"
    )
    return report
