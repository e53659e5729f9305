# relations.py
"""Exact deciders for H0, E0, E1, =+ and products of relations on finitely described points."""
import logging
import math
from fractions import Fraction
from typing import Any, Callable, Dict, Optional, Sequence, Union

from pydantic import Field

from .errors import DomainMismatchError, InvalidInputError, TypeMismatchError
from .models import (
    CycleListPoint,
    FrozenModel,
    PeriodicPoint,
    PeriodicSlopeTail,
    PointX0,
)

logger = logging.getLogger(__name__)


class H0Verdict(FrozenModel):
    """Outcome of h0_decide.

    When related, `witness` is the exact sup_k |a(k) - b(k)|. When unrelated,
    the tails have different slopes `slope_gap` apart on the residue class
    `residue` modulo `modulus`, and certificate() produces coordinates with
    arbitrarily large differences.
    """

    related: bool
    witness: Optional[int] = None
    residue: Optional[int] = None
    modulus: Optional[int] = None
    slope_gap: Optional[Fraction] = None
    start: int = 1
    a: PointX0 = Field(exclude=True, repr=False)
    b: PointX0 = Field(exclude=True, repr=False)

    def certificate(self, bound: int) -> int:
        """A coordinate k with |a(k) - b(k)| > bound."""
        if self.related:
            raise InvalidInputError(f"related points differ by at most {self.witness}")
        offsets = abs(self.a.tail.offset - self.b.tail.offset)
        need = math.floor((bound + 2 + offsets) / self.slope_gap) + 1
        k = max(self.start, need + 1)
        k += (self.residue - k) % self.modulus
        while abs(self.a.coordinate(k) - self.b.coordinate(k)) <= bound:
            k += self.modulus
        return k


def _require(point: Any, kind: type, relation: str) -> None:
    if not isinstance(point, kind):
        raise TypeMismatchError(f"{relation} compares {kind.__name__} values, got {type(point).__name__}")


def h0_decide(a: PointX0, b: PointX0) -> H0Verdict:
    _require(a, PointX0, "H0")
    _require(b, PointX0, "H0")
    modulus = math.lcm(a.tail.modulus, b.tail.modulus)
    # past `start` every coordinate follows the tail rule and constant tails have settled
    start = max(len(a.prefix), len(b.prefix), a.tail.offset, b.tail.offset) + 1

    for residue in range(modulus):
        gap = abs(a.tail.slope_at(residue) - b.tail.slope_at(residue))
        if gap != 0:
            logger.debug(f"H0: slopes differ by {gap} on residue {residue} mod {modulus}")
            return H0Verdict(
                related=False, residue=residue, modulus=modulus, slope_gap=gap, start=start, a=a, b=b
            )

    # equal slopes per residue: the difference is periodic from `start` on
    witness = max(abs(a.coordinate(k) - b.coordinate(k)) for k in range(1, start + modulus + 1))
    return H0Verdict(related=True, witness=witness, modulus=modulus, start=start, a=a, b=b)


def _eventually_equal(a: PeriodicPoint, b: PeriodicPoint) -> bool:
    settled = max(len(a.prefix), len(b.prefix))
    period = math.lcm(len(a.period), len(b.period))
    return all(a.value(k) == b.value(k) for k in range(settled + period, settled + 2 * period))


def e0_decide(a: PeriodicPoint, b: PeriodicPoint) -> bool:
    for point in (a, b):
        _require(point, PeriodicPoint, "E0")
        if point.domain != "bits":
            raise TypeMismatchError(f"E0 compares points of 2^omega, got a {point.domain} point")
    return _eventually_equal(a, b)


def e1_decide(a: PeriodicPoint, b: PeriodicPoint) -> bool:
    for point in (a, b):
        _require(point, PeriodicPoint, "E1")
        if point.domain == "bits":
            raise TypeMismatchError("E1 compares real sequences, got a point of 2^omega")
    return _eventually_equal(a, b)


def eplus_decide(a: CycleListPoint, b: CycleListPoint) -> bool:
    _require(a, CycleListPoint, "=+")
    _require(b, CycleListPoint, "=+")
    if a.interval != b.interval:
        raise DomainMismatchError(
            f"points live in ]{a.interval.lo}, {a.interval.hi}[ and ]{b.interval.lo}, {b.interval.hi}["
        )
    return a.value_set == b.value_set


Decider = Callable[[Any, Any], Union[bool, H0Verdict]]

DECIDERS: Dict[str, Decider] = {
    "H0": h0_decide,
    "E0": e0_decide,
    "E1": e1_decide,
    "=+": eplus_decide,
}


def holds(verdict: Union[bool, H0Verdict]) -> bool:
    if isinstance(verdict, H0Verdict):
        return verdict.related
    return bool(verdict)


def _resolve(relation: Union[str, Decider]) -> Decider:
    if callable(relation):
        return relation
    if relation not in DECIDERS:
        raise InvalidInputError(f"unknown relation {relation!r}; expected one of {sorted(DECIDERS)}")
    return DECIDERS[relation]


def product_decide(
    R: Union[str, Decider],
    R_prime: Union[str, Decider],
    pair1: Sequence[Any],
    pair2: Sequence[Any],
) -> bool:
    """(x, x') R (x) R' (y, y') iff x R y and x' R' y'."""
    for pair in (pair1, pair2):
        if not isinstance(pair, (tuple, list)) or len(pair) != 2:
            raise TypeMismatchError("product relations compare pairs")
    (x, x_prime), (y, y_prime) = pair1, pair2
    return holds(_resolve(R)(x, y)) and holds(_resolve(R_prime)(x_prime, y_prime))


def j_embed(a: PeriodicPoint) -> PointX0:
    """(0, a(1), 2 a(2), 3 a(3), ...) where a(n) is the bit at 0-based index n - 1."""
    _require(a, PeriodicPoint, "j")
    if a.domain != "bits":
        raise TypeMismatchError(f"j embeds points of 2^omega, got a {a.domain} point")
    settled = len(a.prefix)
    prefix = (0,) + tuple(int((k - 1) * a.value(k - 2)) for k in range(2, settled + 2))
    period = len(a.period)
    # coordinate k >= settled + 2 reads period[(k - 2 - settled) mod period]
    slopes = tuple(a.period[(j - 2 - settled) % period] for j in range(period))
    return PointX0(prefix=prefix, tail=PeriodicSlopeTail(slopes=slopes))

