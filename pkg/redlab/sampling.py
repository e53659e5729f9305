# sampling.py
"""Seeded generators of exponents, spaces, vectors, points and schedule arguments."""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .models import (
    AffineTail,
    BlockVector,
    ConstantTail,
    CycleListPoint,
    Exponent,
    OpenInterval,
    OuterNorm,
    PeriodicPoint,
    PeriodicSlopeTail,
    PointX0,
    SumSpace,
)

SLOPES = (
    Fraction(0),
    Fraction(1, 4),
    Fraction(1, 3),
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(3, 4),
    Fraction(1),
)
ORACLE_EXPONENTS = (1.0, 1.2, 1.5, 2.0, 3.0, "inf")
RATIONAL_POOL = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(7, 5))


def _pick(rng: np.random.Generator, items: Sequence):
    return items[int(rng.integers(0, len(items)))]


def random_exponent(rng: np.random.Generator, hi: float = 64.0, inf_share: float = 0.1) -> Exponent:
    if rng.random() < inf_share:
        return Exponent.infinity()
    if rng.random() < 0.05:
        return Exponent.of(1.0)
    return Exponent.of(float(rng.uniform(1.0, hi)))


def random_coefficients(rng: np.random.Generator, size: int) -> List[float]:
    values = rng.standard_normal(size)
    values[rng.random(size) < 0.3] = 0.0
    return [float(v) for v in values]


def random_space(
    rng: np.random.Generator,
    p: float,
    max_blocks: int = 6,
    max_dim: int = 8,
    c0: bool = False,
) -> SumSpace:
    """Outer l_p (or c0) over blocks with exponents in [p, 2]."""
    blocks = []
    for _ in range(int(rng.integers(1, max_blocks + 1))):
        exponent = float(rng.uniform(p, 2.0)) if p < 2.0 else p
        blocks.append((exponent, int(rng.integers(1, max_dim + 1))))
    outer = OuterNorm.c0() if c0 else OuterNorm.lp(p)
    return SumSpace.build(outer, blocks)


def random_vector(rng: np.random.Generator, space: SumSpace) -> BlockVector:
    return BlockVector.from_blocks(space, [random_coefficients(rng, block.dim) for block in space.blocks])


def random_disjoint_family(rng: np.random.Generator, space: SumSpace, k: int) -> List[BlockVector]:
    """k vectors whose supports partition a random subset of the coordinates."""
    owners = [rng.integers(-1, k, size=block.dim) for block in space.blocks]
    family = []
    for i in range(k):
        coeffs = [
            [float(rng.standard_normal()) if owner == i else 0.0 for owner in block_owners]
            for block_owners in owners
        ]
        family.append(BlockVector.from_blocks(space, coeffs))
    return family


def random_successive_family(rng: np.random.Generator, space: SumSpace) -> List[BlockVector]:
    """Vectors supported on consecutive runs of blocks."""
    n = space.truncation_len
    cuts = sorted(set(int(c) for c in rng.integers(1, n + 1, size=int(rng.integers(0, n + 1)))) | {n})
    family = []
    start = 0
    for stop in cuts:
        coeffs = [
            random_coefficients(rng, block.dim) if start <= i < stop else [0.0] * block.dim
            for i, block in enumerate(space.blocks)
        ]
        family.append(BlockVector.from_blocks(space, coeffs))
        start = stop
    return family


def random_tail(rng: np.random.Generator, max_constant: int = 8, max_modulus: int = 4):
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return ConstantTail(c=int(rng.integers(0, max_constant + 1)))
    if kind == 1:
        return AffineTail(r=_pick(rng, SLOPES))
    modulus = int(rng.integers(1, max_modulus + 1))
    return PeriodicSlopeTail(slopes=tuple(_pick(rng, SLOPES) for _ in range(modulus)))


def random_prefix(rng: np.random.Generator, length: int) -> Tuple[int, ...]:
    return tuple(int(rng.integers(0, i + 1)) for i in range(length))


def random_point_x0(rng: np.random.Generator, max_prefix: int = 8, tail=None) -> PointX0:
    length = int(rng.integers(0, max_prefix + 1))
    return PointX0(prefix=random_prefix(rng, length), tail=tail if tail is not None else random_tail(rng))


def nearby_point_x0(rng: np.random.Generator, a: PointX0, spread: int = 4, max_prefix: int = 8) -> PointX0:
    """A point with the same tail as `a`, prefix coordinates moved by at most `spread`."""
    length = int(rng.integers(0, max_prefix + 1))
    prefix = tuple(
        int(np.clip(a.coordinate(k) + rng.integers(-spread, spread + 1), 0, k - 1)) for k in range(1, length + 1)
    )
    return PointX0(prefix=prefix, tail=a.tail)


def random_x0_pair(rng: np.random.Generator) -> Tuple[PointX0, PointX0]:
    a = random_point_x0(rng)
    if rng.random() < 0.5:
        return a, nearby_point_x0(rng, a)
    return a, random_point_x0(rng)


def random_periodic_point(
    rng: np.random.Generator,
    pool: Sequence[Fraction],
    domain: str = "bits",
    max_prefix: int = 6,
    max_period: int = 4,
    interval: Optional[OpenInterval] = None,
) -> PeriodicPoint:
    prefix = tuple(_pick(rng, pool) for _ in range(int(rng.integers(0, max_prefix + 1))))
    period = tuple(_pick(rng, pool) for _ in range(int(rng.integers(1, max_period + 1))))
    return PeriodicPoint(domain=domain, prefix=prefix, period=period, interval=interval)


def eventually_equal_partner(
    rng: np.random.Generator, a: PeriodicPoint, pool: Sequence[Fraction], max_prefix: int = 6
) -> PeriodicPoint:
    """Another encoding of a sequence that agrees with `a` from some index on."""
    settled = max(len(a.prefix), int(rng.integers(0, max_prefix + 1)))
    prefix = tuple(_pick(rng, pool) for _ in range(settled))
    period = tuple(a.value(settled + i) for i in range(len(a.period)))
    return PeriodicPoint(domain=a.domain, prefix=prefix, period=period, interval=a.interval)


def random_periodic_pair(
    rng: np.random.Generator, pool: Sequence[Fraction], domain: str = "bits"
) -> Tuple[PeriodicPoint, PeriodicPoint]:
    a = random_periodic_point(rng, pool, domain)
    if rng.random() < 0.5:
        return a, eventually_equal_partner(rng, a, pool)
    return a, random_periodic_point(rng, pool, domain)


def bit_pool() -> Tuple[Fraction, Fraction]:
    return (Fraction(0), Fraction(1))


def interval_pool(interval: OpenInterval, size: int = 4) -> List[Fraction]:
    """`size` rationals evenly spread strictly inside the interval."""
    step = (interval.hi - interval.lo) / (size + 1)
    return [interval.lo + step * (i + 1) for i in range(size)]


def random_cycle_point(
    rng: np.random.Generator, interval: OpenInterval, pool: Sequence[Fraction], max_len: int = 5
) -> CycleListPoint:
    values = tuple(_pick(rng, pool) for _ in range(int(rng.integers(1, max_len + 1))))
    return CycleListPoint(values=values, interval=interval)


def shuffled_partner(rng: np.random.Generator, b: CycleListPoint) -> CycleListPoint:
    """Same value set as `b`, permuted and with duplicates."""
    values = list(b.values) + [_pick(rng, b.values) for _ in range(int(rng.integers(0, 3)))]
    order = rng.permutation(len(values))
    return CycleListPoint(values=tuple(values[i] for i in order), interval=b.interval)


def random_cycle_pair(
    rng: np.random.Generator, interval: OpenInterval, pool: Sequence[Fraction]
) -> Tuple[CycleListPoint, CycleListPoint]:
    b = random_cycle_point(rng, interval, pool)
    if rng.random() < 0.5:
        return b, shuffled_partner(rng, b)
    return b, random_cycle_point(rng, interval, pool)


def random_schedule_args(rng: np.random.Generator, n_max: int = 12) -> Tuple[str, float, int, float]:
    """(flavor, base_p, n_max, margin) inside the generator's feasible region."""
    flavor = "lp" if rng.random() < 0.5 else "c0"
    base_p = round(float(rng.uniform(1.0, 1.8)), 3)
    return flavor, base_p, int(rng.integers(1, n_max + 1)), round(float(rng.uniform(0.2, 0.9)), 3)
