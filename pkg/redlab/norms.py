# norms.py
"""Exact finite-dimensional l_p calculus: norms, nested sum norms and equivalence constants."""
import logging
import math
from typing import Sequence, Union

import numpy as np

from .errors import (
    InvalidExponentsError,
    InvalidInputError,
    NotDisjointError,
    NotSuccessiveError,
    OracleBoundExceededError,
)
from .models import (
    BlockVector,
    BoundsCheck,
    Exponent,
    InequalityCheck,
    OracleResult,
)
from .utils import TOLERANCE, within

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_BOUND = 64

ExponentLike = Union[Exponent, float, int, str]


def lp_norms(rows: np.ndarray, p: ExponentLike) -> np.ndarray:
    """Row-wise l_p norms of a 2-d array, rescaled by the row maximum to avoid overflow."""
    p = Exponent.of(p)
    a = np.abs(np.asarray(rows, dtype=float))
    if a.ndim != 2 or a.shape[1] == 0:
        raise InvalidInputError("expected a non-empty 2-d array of coefficients")
    peak = a.max(axis=1)
    if p.is_infinite:
        return peak
    safe = np.where(peak > 0.0, peak, 1.0)
    scaled = a / safe[:, None]
    # np.sum is pairwise, so long blocks keep their precision
    return np.where(peak > 0.0, safe * np.sum(scaled ** p.value, axis=1) ** (1.0 / p.value), 0.0)


def lp_norm(coeffs: Sequence[float], p: ExponentLike) -> float:
    values = np.asarray(coeffs, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise InvalidInputError("lp_norm needs a non-empty list of coefficients")
    return float(lp_norms(values[None, :], p)[0])


def block_norms(v: BlockVector) -> list:
    return [lp_norm(values, block.exponent) for block, values in zip(v.space.blocks, v.coeffs)]


def sum_norm(v: BlockVector) -> float:
    """Outer norm of the per-block norms; a c0 outer norm is the max on the truncation."""
    return lp_norm(block_norms(v), v.space.outer.norm_exponent)


def log_eq_const(p: ExponentLike, q: ExponentLike, log_k: float) -> float:
    """log of K^{|1/p - 1/q|} given log K."""
    p, q = Exponent.of(p), Exponent.of(q)
    if log_k < 0:
        raise InvalidInputError(f"log K must be >= 0, got {log_k}")
    if p == q or log_k == 0.0:
        return 0.0
    return abs(p.inverse - q.inverse) * log_k


def eq_const_closed_form(p: ExponentLike, q: ExponentLike, K: int) -> float:
    """Equivalence constant between the canonical bases of l_p^K and l_q^K."""
    if K < 1:
        raise InvalidInputError(f"K must be >= 1, got {K}")
    return _exp(log_eq_const(p, q, math.log(K)))


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def oracle_profile(
    p: ExponentLike,
    q: ExponentLike,
    K: int,
    samples: int,
    seed: int,
    bound: int = DEFAULT_ORACLE_BOUND,
) -> OracleResult:
    """Brute-force search for the largest norm ratio between l_p^K and l_q^K.

    Flat support profiles are enumerated exactly; seeded random vectors try to
    beat them.
    """
    p, q = Exponent.of(p), Exponent.of(q)
    if K < 1:
        raise InvalidInputError(f"K must be >= 1, got {K}")
    if K > bound:
        raise OracleBoundExceededError(f"K = {K} exceeds the oracle bound {bound}")
    if samples < 1:
        raise InvalidInputError(f"samples must be >= 1, got {samples}")

    flats = np.tril(np.ones((K, K)))
    flat_ratios = lp_norms(flats, p) / lp_norms(flats, q)
    flat_max = float(np.max(np.maximum(flat_ratios, 1.0 / flat_ratios)))

    rng = np.random.default_rng(seed)
    vectors = rng.standard_normal((samples, K))
    density = rng.random((samples, 1))
    vectors = np.where(rng.random((samples, K)) < density, vectors, 0.0)
    # every row keeps at least one nonzero coordinate
    anchor = rng.integers(0, K, size=samples)
    vectors[np.arange(samples), anchor] = 1.0 + np.abs(rng.standard_normal(samples))
    ratios = lp_norms(vectors, p) / lp_norms(vectors, q)
    sample_max = float(np.max(np.maximum(ratios, 1.0 / ratios)))

    logger.debug(f"oracle p={p} q={q} K={K}: flat={flat_max} sampled={sample_max}")
    return OracleResult(flat_max=flat_max, sample_max=sample_max, samples=samples)


def eq_const_oracle(
    p: ExponentLike,
    q: ExponentLike,
    K: int,
    samples: int,
    seed: int,
    bound: int = DEFAULT_ORACLE_BOUND,
) -> float:
    return oracle_profile(p, q, K, samples, seed, bound).value


def lemma_2_1_bounds(p: float, q: float, K: int, c_upper_bound: float, tol: float = TOLERANCE) -> BoundsCheck:
    """Exponential sandwich exp(|p-q| log K / c^2) <= K^{|1/p-1/q|} <= exp(|p-q| log K)."""
    if min(p, q) < 1:
        raise InvalidInputError(f"exponents must be >= 1, got p={p}, q={q}")
    if c_upper_bound < max(p, q):
        raise InvalidInputError(f"c = {c_upper_bound} is not an upper bound for p={p}, q={q}")
    if K < 1:
        raise InvalidInputError(f"K must be >= 1, got {K}")
    spread = abs(p - q) * math.log(K)
    lower = _exp(spread / c_upper_bound ** 2)
    upper = _exp(spread)
    constant = eq_const_closed_form(p, q, K)
    holds = within(lower, constant, tol) and within(constant, upper, tol)
    return BoundsCheck(lower=lower, upper=upper, constant=constant, holds=holds)


def _check_same_space(vectors: Sequence[BlockVector]) -> None:
    if not vectors:
        raise InvalidInputError("at least one vector is required")
    space = vectors[0].space
    if any(v.space != space for v in vectors[1:]):
        raise InvalidInputError("all vectors must live in the same space")


def _total(vectors: Sequence[BlockVector]) -> BlockVector:
    total = vectors[0]
    for v in vectors[1:]:
        total = total + v
    return total


def check_lower_p_estimate(vectors: Sequence[BlockVector], p: ExponentLike) -> float:
    """Smallest C >= 1 with (sum ||x_i||^p)^{1/p} <= C ||sum x_i|| on these successive vectors."""
    _check_same_space(vectors)
    p = Exponent.of(p)
    last = -1
    for i, v in enumerate(vectors):
        blocks = v.block_support()
        if not blocks:
            continue
        if blocks[0] <= last:
            raise NotSuccessiveError(f"vector {i} starts at block {blocks[0]}, not after block {last}")
        last = blocks[-1]
    numerator = lp_norm([sum_norm(v) for v in vectors], p)
    denominator = sum_norm(_total(vectors))
    if denominator == 0.0:
        return 1.0
    return max(1.0, numerator / denominator)


def lemma_2_4_check(
    vectors: Sequence[BlockVector], p: ExponentLike, C: float = 1.0, tol: float = TOLERANCE
) -> InequalityCheck:
    """sum ||y_i|| <= C k^{1/r'} ||sum y_i|| for disjointly supported y_i, r the largest block exponent."""
    _check_same_space(vectors)
    p = Exponent.of(p)
    if C < 1:
        raise InvalidInputError(f"the lower-estimate constant must be >= 1, got {C}")
    space = vectors[0].space
    if space.outer.kind != "lp" or space.outer.exponent != p:
        raise InvalidExponentsError(f"the ambient space must be an l_{p}-sum")
    if any(block.exponent.inverse > p.inverse for block in space.blocks):
        raise InvalidExponentsError(f"every block exponent must be >= {p}")
    supports = [v.support() for v in vectors]
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if not supports[i].isdisjoint(supports[j]):
                raise NotDisjointError(f"vectors {i} and {j} share coordinates")

    r = min((block.exponent for block in space.blocks), key=lambda e: e.inverse)
    k = len(vectors)
    lhs = sum(sum_norm(v) for v in vectors)
    rhs = C * _exp(r.conjugate().inverse * math.log(k)) * sum_norm(_total(vectors))
    return InequalityCheck(lhs=lhs, rhs=rhs, holds=within(lhs, rhs, tol))
