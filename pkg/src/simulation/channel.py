"""
Monte Carlo simulation of the lossy coding channel

A message picks one of M i.i.d. Bernoulli(p) codewords as the support of the
source block; the block goes through the two-stage codec; the receiver picks
the codeword with the most positions where it is 1 and |xhat| >= L.
By symmetry the last message is sent in every trial, so a competitor that
ties its score wins under the smallest-index rule.

Competitor scores only see xhat through the positions with |xhat| >= L, so a
random competitor scores Binomial(A, p) with A the number of such positions.
Codebooks up to MAX_CODEBOOK words are drawn literally; above that the best
competitor score is drawn from its exact distribution F(t)^(M-1).
"""
import math
from typing import Dict, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy import stats

from simulation.codec import BlockCodec
from simulation.sampling import bernoulli_bits, open_uniforms, philox_stream, standard_normals
from simulation.typicality import DEFAULT_K, DEFAULT_OMEGA, bernoulli_typicality, gaussian_typicality
from theory.minimax import improvement_ri
from utils.logger import STATS, get_logger

logger = get_logger("channel")

MAX_CODEBOOK = 2 ** 16
_LOG2_MAX_CODEBOOK = 16
# Codebook rows drawn per batch on the literal path
_CODEBOOK_CHUNK = 4096

# Default Gaussian typicality tolerance is this many standard errors of the
# expected support size p*n, floored at 0.1
TYPICALITY_SCALE = 4.0
_MIN_TYPICALITY_EPSILON = 0.1

FAILURE_MODES = ("codeword_atypical", "gaussian_atypical", "distortion_excess", "score_confusion")


class ChannelConfig(BaseModel):
    """
    One channel experiment

    An unset typicality_epsilon resolves to TYPICALITY_SCALE / sqrt(p*n),
    floored at 0.1.
    """

    n: int = Field(ge=1)
    p: float = Field(gt=0.0, lt=1.0)
    rate_tilde: float = Field(ge=0.0)
    L: Optional[float] = Field(default=None, ge=0.0)
    D: float = Field(gt=0.0)
    trials: int = Field(ge=1)
    seed: int = Field(default=0, ge=0)
    support_epsilon: float = Field(default=0.05, gt=0.0)
    typicality_epsilon: Optional[float] = Field(default=None, gt=0.0)
    delta1: Optional[float] = Field(default=None, gt=0.0)
    K: int = Field(default=DEFAULT_K, ge=1)
    omega: float = Field(default=DEFAULT_OMEGA, gt=0.0)

    @property
    def log2_codebook_size(self) -> float:
        return self.n * self.rate_tilde

    @property
    def materialized(self) -> bool:
        return self.log2_codebook_size <= _LOG2_MAX_CODEBOOK

    @property
    def codebook_size(self) -> Optional[int]:
        """M = ceil(2^(n R)) when it fits the literal path, else None"""
        if not self.materialized:
            return None
        return max(1, math.ceil(2.0 ** self.log2_codebook_size))

    @property
    def resolved_typicality_epsilon(self) -> float:
        if self.typicality_epsilon is not None:
            return self.typicality_epsilon
        return max(_MIN_TYPICALITY_EPSILON, TYPICALITY_SCALE / math.sqrt(max(1.0, self.p * self.n)))

    @property
    def distortion_slack(self) -> float:
        return self.delta1 if self.delta1 is not None else 0.5 * self.D


class ChannelReport(BaseModel):
    n: int
    rate_tilde: float
    L: float
    L_source: Literal["flag", "witness"]
    log2_codebook_size: float
    materialized: bool
    error_rate: float
    std_error: float
    score_margin_stats: Dict[str, float]
    mean_true_score: float
    failure_modes: Dict[str, int]
    trials: int
    seed: int


def sample_codebook(M: int, n: int, p: float, seed: int) -> np.ndarray:
    """M x n boolean array of i.i.d. Bernoulli(p) codewords"""
    if M < 1:
        raise ValueError(f"codebook needs at least one word, got M={M}")
    if n < 1:
        raise ValueError(f"block length must be positive, got {n}")
    return bernoulli_bits(philox_stream(seed), M * n, p).reshape(M, n)


def _above(xhat: np.ndarray, L: float) -> np.ndarray:
    return np.abs(np.asarray(xhat, dtype=float)) >= L


def score(c, xhat, L: float) -> int:
    """Positions where c is 1 and |xhat| >= L"""
    c = np.asarray(c).ravel()
    xhat = np.asarray(xhat, dtype=float).ravel()
    if c.size != xhat.size:
        raise ValueError(f"codeword length {c.size} does not match reconstruction length {xhat.size}")
    return int(np.count_nonzero(c.astype(bool) & _above(xhat, L)))


def decode(codebook, xhat, L: float) -> int:
    """Index of the highest-scoring codeword, smallest index on ties"""
    codebook = np.atleast_2d(np.asarray(codebook, dtype=bool))
    xhat = np.asarray(xhat, dtype=float).ravel()
    if codebook.shape[0] == 0:
        raise ValueError("codebook is empty")
    if codebook.shape[1] != xhat.size:
        raise ValueError(f"codeword length {codebook.shape[1]} does not match reconstruction length {xhat.size}")
    scores = codebook[:, _above(xhat, L)].sum(axis=1)
    return int(np.argmax(scores))


def _literal_best_competitor(rng: np.random.Generator, competitors: int, mask: np.ndarray, p: float) -> int:
    best = -1
    n = mask.size
    remaining = competitors
    while remaining > 0:
        rows = min(remaining, _CODEBOOK_CHUNK)
        block = bernoulli_bits(rng, rows * n, p).reshape(rows, n)
        best = max(best, int(block[:, mask].sum(axis=1).max()))
        remaining -= rows
    return best


def _sampled_best_competitor(rng: np.random.Generator, log2_competitors: float, active: int, p: float) -> int:
    """
    Inverse-CDF draw of max over 2^log2_competitors Binomial(active, p) scores

    The smallest t with F(t)^m >= u is the first t where
    m * (-log F(t)) <= -log u, evaluated through the survival function.
    """
    if active == 0:
        return 0
    u = float(open_uniforms(rng, 1)[0])
    t = np.arange(active + 1)
    with np.errstate(divide="ignore"):
        neg_log_cdf = -np.log1p(-np.exp(stats.binom.logsf(t, active, p)))
        lhs = np.log(neg_log_cdf) + log2_competitors * math.log(2.0)
    return int(np.argmax(lhs <= math.log(-math.log(u))))


def run_channel_experiment(cfg: ChannelConfig) -> ChannelReport:
    """
    Estimate the decoding error rate at rate cfg.rate_tilde

    Trial t draws everything from philox_stream(cfg.seed, t). The transmitted
    codeword sits at the last index, so a trial fails when some competitor
    scores at least as high.

    Returns:
        ChannelReport with the error rate and a histogram of the diagnostic
        failure conditions (a trial may register several)
    """
    if cfg.L is None:
        L = improvement_ri(cfg.D, cfg.p).witness.L
        L_source = "witness"
    else:
        L, L_source = cfg.L, "flag"

    codec = BlockCodec(cfg.n, cfg.p, cfg.D, cfg.support_epsilon)
    M = cfg.codebook_size
    log2_competitors = None
    if M is None:
        M_log2 = cfg.log2_codebook_size
        # log2(M - 1) for M = 2^M_log2 > 2^16
        log2_competitors = M_log2 + math.log2(-math.expm1(-M_log2 * math.log(2.0)))

    errors = 0
    margins = np.empty(cfg.trials)
    true_scores = np.empty(cfg.trials)
    modes = {mode: 0 for mode in FAILURE_MODES}
    for t in range(cfg.trials):
        rng = philox_stream(cfg.seed, t)
        c1 = bernoulli_bits(rng, cfg.n, cfg.p)
        s = standard_normals(rng, cfg.n)
        x = np.where(c1, s, 0.0)
        _, xhat = codec.decode(codec.encode(c1, s))

        mask = _above(xhat, L)
        true_score = int(np.count_nonzero(c1 & mask))
        if M is not None:
            best = _literal_best_competitor(rng, M - 1, mask, cfg.p) if M > 1 else -1
        else:
            best = _sampled_best_competitor(rng, log2_competitors, int(np.count_nonzero(mask)), cfg.p)

        failed = best >= true_score
        errors += failed
        margins[t] = true_score - best if best >= 0 else true_score
        true_scores[t] = true_score

        if not bernoulli_typicality(c1, cfg.p, cfg.support_epsilon):
            modes["codeword_atypical"] += 1
        values = s[c1]
        if values.size == 0 or not gaussian_typicality(values, cfg.resolved_typicality_epsilon, cfg.K, cfg.omega).is_typical:
            modes["gaussian_atypical"] += 1
        if float(np.mean((x - xhat) ** 2)) >= cfg.D + cfg.distortion_slack:
            modes["distortion_excess"] += 1
        if failed:
            modes["score_confusion"] += 1

    error_rate = errors / cfg.trials
    logger.info(
        f"{STATS} channel n={cfg.n} rate={cfg.rate_tilde:.4g} L={L:.4g}: "
        f"{errors}/{cfg.trials} errors, modes {modes}"
    )
    return ChannelReport(
        n=cfg.n,
        rate_tilde=cfg.rate_tilde,
        L=L,
        L_source=L_source,
        log2_codebook_size=cfg.log2_codebook_size,
        materialized=M is not None,
        error_rate=error_rate,
        std_error=math.sqrt(error_rate * (1.0 - error_rate) / cfg.trials),
        score_margin_stats={
            "mean": float(margins.mean()),
            "std": float(margins.std()),
            "min": float(margins.min()),
            "max": float(margins.max()),
        },
        mean_true_score=float(true_scores.mean()),
        failure_modes=modes,
        trials=cfg.trials,
        seed=cfg.seed
    )
