# models.py
import math
from fractions import Fraction
from typing import Annotated, Any, Dict, FrozenSet, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator

from .errors import (
    DescriptorOnlyError,
    InvalidInputError,
    InvalidPointError,
)
from .utils import TOLERANCE, to_fraction

INF = "inf"
EXACT_DIM_LIMIT = 2 ** 53
CONJUGATE_DENOMINATOR = 10 ** 9
LOG_EXACT_DIM_LIMIT = math.log(EXACT_DIM_LIMIT)

Rational = Annotated[Fraction, BeforeValidator(to_fraction)]
ExponentValue = Union[float, Literal["inf"]]


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# ---------------------------------------------------------------------------
# Exponents and sum spaces
# ---------------------------------------------------------------------------

def _normalize_exponent_value(raw) -> ExponentValue:
    if isinstance(raw, Exponent):
        return raw.value
    if isinstance(raw, bool):
        raise InvalidInputError("an exponent cannot be a boolean")
    if isinstance(raw, str):
        text = raw.strip().lower()
        if text in ("inf", "+inf", "infinity", "∞"):
            return INF
        try:
            raw = float(text)
        except ValueError:
            raise InvalidInputError(f"cannot read an exponent from {raw!r}")
    if isinstance(raw, Fraction):
        raw = float(raw)
    if isinstance(raw, (int, float)):
        value = float(raw)
        if math.isnan(value):
            raise InvalidInputError("exponent is NaN")
        if math.isinf(value):
            if value > 0:
                return INF
            raise InvalidInputError("exponent is -inf")
        return value
    raise InvalidInputError(f"cannot read an exponent from {raw!r}")


def _conjugate_value(value: ExponentValue) -> ExponentValue:
    if value == INF:
        return 1.0
    if value == 1.0:
        return INF
    # short rationals first, so 6/5 and 6 are each other's conjugates exactly
    ratio = Fraction(value).limit_denominator(CONJUGATE_DENOMINATOR)
    if float(ratio) != value:
        ratio = Fraction(value)
    return float(ratio / (ratio - 1))


class Exponent(FrozenModel):
    """A value p in [1, +inf] together with its conjugate p'.

    The conjugate is stored, not recomputed, so that conjugate() is an exact
    involution; +inf is the tag "inf", never a float. Two exponents are equal
    when their values are, whatever path produced the stored conjugate.
    """

    value: ExponentValue
    dual: ExponentValue

    @model_validator(mode="before")
    @classmethod
    def _fill_dual(cls, data):
        if isinstance(data, Exponent):
            return {"value": data.value, "dual": data.dual}
        if not isinstance(data, dict):
            data = {"value": data}
        value = _normalize_exponent_value(data.get("value"))
        dual = data.get("dual")
        dual = _conjugate_value(value) if dual is None else _normalize_exponent_value(dual)
        return {"value": value, "dual": dual}

    @model_validator(mode="after")
    def _check_range(self):
        for side in (self.value, self.dual):
            if side != INF and side < 1.0:
                raise InvalidInputError(f"exponent must be >= 1, got {side}")
        if abs(self.inverse + self.dual_inverse - 1.0) > 1e-12:
            raise InvalidInputError(f"{self.dual} is not the conjugate of {self.value}")
        return self

    @classmethod
    def of(cls, raw) -> "Exponent":
        if isinstance(raw, Exponent):
            return raw
        return cls(value=raw)

    @classmethod
    def infinity(cls) -> "Exponent":
        return cls(value=INF)

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    @property
    def inverse(self) -> float:
        return 0.0 if self.value == INF else 1.0 / self.value

    @property
    def dual_inverse(self) -> float:
        return 0.0 if self.dual == INF else 1.0 / self.dual

    @property
    def as_float(self) -> float:
        return math.inf if self.value == INF else self.value

    def conjugate(self) -> "Exponent":
        return Exponent(value=self.dual, dual=self.value)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Exponent):
            return NotImplemented
        return self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else repr(self.value)


class BlockSpec(FrozenModel):
    """One summand l_{p_n}^{K_n}; `dim` is None when K_n is only known by its log."""

    exponent: Exponent
    dim: Optional[int] = None
    log_dim: float

    @model_validator(mode="before")
    @classmethod
    def _fill_log_dim(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        dim = data.get("dim")
        if dim is not None and int(dim) < 1:
            raise InvalidInputError(f"block dimension must be >= 1, got {dim}")
        if data.get("log_dim") is None:
            if dim is None:
                raise InvalidInputError("a block needs its dimension or its log-dimension")
            data["log_dim"] = math.log(int(dim))
        if dim is not None and int(dim) > EXACT_DIM_LIMIT:
            data["dim"] = None
        return data

    @model_validator(mode="after")
    def _check_log_dim(self):
        if not self.log_dim >= 0.0 or math.isinf(self.log_dim):
            raise InvalidInputError(f"log-dimension must be finite and >= 0, got {self.log_dim}")
        return self

    @property
    def exact(self) -> bool:
        return self.dim is not None


class OuterNorm(FrozenModel):
    kind: Literal["lp", "c0"]
    exponent: Optional[Exponent] = None

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == "lp":
            if self.exponent is None or self.exponent.is_infinite:
                raise InvalidInputError("an lp outer norm needs a finite exponent")
        elif self.exponent is not None:
            raise InvalidInputError("a c0 outer norm takes no exponent")
        return self

    @classmethod
    def lp(cls, p) -> "OuterNorm":
        return cls(kind="lp", exponent=Exponent.of(p))

    @classmethod
    def c0(cls) -> "OuterNorm":
        return cls(kind="c0")

    @property
    def norm_exponent(self) -> Exponent:
        # on a finite truncation the c0 norm is the max norm
        return self.exponent if self.exponent is not None else Exponent.infinity()


class SumSpace(FrozenModel):
    outer: OuterNorm
    blocks: Tuple[BlockSpec, ...]

    @model_validator(mode="after")
    def _check_blocks(self):
        if not self.blocks:
            raise InvalidInputError("a sum space needs at least one block")
        return self

    @classmethod
    def build(cls, outer: OuterNorm, blocks: List[Tuple[object, int]]) -> "SumSpace":
        """Shorthand: blocks given as (exponent, dim) pairs."""
        return cls(
            outer=outer,
            blocks=tuple(BlockSpec(exponent=Exponent.of(p), dim=k) for p, k in blocks),
        )

    @property
    def truncation_len(self) -> int:
        return len(self.blocks)

    @property
    def exact(self) -> bool:
        return all(block.exact for block in self.blocks)

    @property
    def total_dim(self) -> Optional[int]:
        if not self.exact:
            return None
        return sum(block.dim for block in self.blocks)

    @property
    def total_log_dim(self) -> float:
        return float(np.logaddexp.reduce([block.log_dim for block in self.blocks]))


class BlockVector(FrozenModel):
    """Coefficients of a vector of a SumSpace, grouped by block."""

    space: SumSpace
    coeffs: Tuple[Tuple[float, ...], ...]

    @model_validator(mode="after")
    def _check_shape(self):
        if not self.space.exact:
            raise DescriptorOnlyError("vectors cannot be instantiated on a space with log-only dimensions")
        if len(self.coeffs) != self.space.truncation_len:
            raise InvalidInputError(
                f"expected {self.space.truncation_len} blocks of coefficients, got {len(self.coeffs)}"
            )
        for i, (block, values) in enumerate(zip(self.space.blocks, self.coeffs)):
            if len(values) != block.dim:
                raise InvalidInputError(f"block {i} has dimension {block.dim} but {len(values)} coefficients")
        return self

    @classmethod
    def zeros(cls, space: SumSpace) -> "BlockVector":
        if not space.exact:
            raise DescriptorOnlyError("vectors cannot be instantiated on a space with log-only dimensions")
        return cls(space=space, coeffs=tuple((0.0,) * block.dim for block in space.blocks))

    @classmethod
    def unit(cls, space: SumSpace, block: int, index: int, value: float = 1.0) -> "BlockVector":
        zero = cls.zeros(space)
        coeffs = [list(values) for values in zero.coeffs]
        coeffs[block][index] = float(value)
        return cls(space=space, coeffs=tuple(tuple(values) for values in coeffs))

    @classmethod
    def from_blocks(cls, space: SumSpace, blocks) -> "BlockVector":
        return cls(space=space, coeffs=tuple(tuple(float(c) for c in values) for values in blocks))

    def support(self) -> FrozenSet[Tuple[int, int]]:
        # exact zero test: coefficients are constructed, not measured
        return frozenset(
            (i, j) for i, values in enumerate(self.coeffs) for j, c in enumerate(values) if c != 0.0
        )

    def block_support(self) -> Tuple[int, ...]:
        return tuple(i for i, values in enumerate(self.coeffs) if any(c != 0.0 for c in values))

    def is_disjoint_from(self, other: "BlockVector") -> bool:
        return self.support().isdisjoint(other.support())

    def __add__(self, other: "BlockVector") -> "BlockVector":
        if other.space != self.space:
            raise InvalidInputError("cannot add vectors of different spaces")
        return BlockVector(
            space=self.space,
            coeffs=tuple(
                tuple(a + b for a, b in zip(left, right)) for left, right in zip(self.coeffs, other.coeffs)
            ),
        )

    def scaled(self, factor: float) -> "BlockVector":
        return BlockVector(
            space=self.space,
            coeffs=tuple(tuple(factor * c for c in values) for values in self.coeffs),
        )


# ---------------------------------------------------------------------------
# Points of the source spaces
# ---------------------------------------------------------------------------

def _check_unit_slope(slope: Fraction) -> Fraction:
    if not 0 <= slope <= 1:
        raise InvalidPointError(f"tail slopes must lie in [0, 1], got {slope}")
    return slope


class ConstantTail(FrozenModel):
    kind: Literal["constant"] = "constant"
    c: int = 0

    @model_validator(mode="after")
    def _check(self):
        if self.c < 0:
            raise InvalidPointError(f"constant tail must be >= 0, got {self.c}")
        return self

    @property
    def modulus(self) -> int:
        return 1

    @property
    def offset(self) -> int:
        return self.c

    def slope_at(self, k: int) -> Fraction:
        return Fraction(0)

    def rule(self, k: int) -> int:
        return self.c


class AffineTail(FrozenModel):
    """alpha(k) = floor(r (k - 1)); Affine(1) is the maximal point k - 1."""

    kind: Literal["affine"] = "affine"
    r: Rational

    @model_validator(mode="after")
    def _check(self):
        _check_unit_slope(self.r)
        return self

    @property
    def modulus(self) -> int:
        return 1

    @property
    def offset(self) -> int:
        return 0

    def slope_at(self, k: int) -> Fraction:
        return self.r

    def rule(self, k: int) -> int:
        return math.floor(self.r * (k - 1))


class PeriodicSlopeTail(FrozenModel):
    """alpha(k) = floor(r_{k mod m} (k - 1)) with one slope per residue."""

    kind: Literal["periodic"] = "periodic"
    slopes: Tuple[Rational, ...]

    @model_validator(mode="after")
    def _check(self):
        if not self.slopes:
            raise InvalidPointError("a periodic-slope tail needs at least one slope")
        for slope in self.slopes:
            _check_unit_slope(slope)
        return self

    @property
    def modulus(self) -> int:
        return len(self.slopes)

    @property
    def offset(self) -> int:
        return 0

    def slope_at(self, k: int) -> Fraction:
        return self.slopes[k % len(self.slopes)]

    def rule(self, k: int) -> int:
        return math.floor(self.slope_at(k) * (k - 1))


TailRule = Annotated[Union[ConstantTail, AffineTail, PeriodicSlopeTail], Field(discriminator="kind")]


class PointX0(FrozenModel):
    """A point of X_0 = prod_{n>=1} {0, ..., n-1}; coordinates are indexed from k = 1."""

    prefix: Tuple[int, ...] = ()
    tail: TailRule = Field(default_factory=ConstantTail)

    @model_validator(mode="after")
    def _check_prefix(self):
        for i, value in enumerate(self.prefix):
            if not 0 <= value <= i:
                raise InvalidPointError(f"coordinate {i + 1} must lie in 0..{i}, got {value}")
        return self

    def coordinate(self, k: int) -> int:
        if k < 1:
            raise InvalidInputError(f"X0 coordinates start at 1, got {k}")
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        return min(self.tail.rule(k), k - 1)

    def coordinates(self, n: int) -> List[int]:
        return [self.coordinate(k) for k in range(1, n + 1)]


class OpenInterval(FrozenModel):
    lo: Rational
    hi: Rational

    @model_validator(mode="after")
    def _check(self):
        if not self.lo < self.hi:
            raise InvalidInputError(f"empty interval ]{self.lo}, {self.hi}[")
        return self

    @classmethod
    def for_base(cls, p) -> "OpenInterval":
        """The exponent interval ](p+1)/2, 2[ used for base p."""
        p = to_fraction(p)
        return cls(lo=(p + 1) / 2, hi=Fraction(2))

    @classmethod
    def above(cls, p) -> "OpenInterval":
        """]p, 2[: the exponents X(alpha) accepts over base p."""
        return cls(lo=to_fraction(p), hi=Fraction(2))

    def contains(self, x: Fraction) -> bool:
        return self.lo < x < self.hi


class PeriodicPoint(FrozenModel):
    """An eventually periodic sequence x(0), x(1), ... over bits, rationals or an interval."""

    domain: Literal["bits", "rationals", "interval"] = "bits"
    prefix: Tuple[Rational, ...] = ()
    period: Tuple[Rational, ...]
    interval: Optional[OpenInterval] = None

    @model_validator(mode="after")
    def _check_values(self):
        if not self.period:
            raise InvalidPointError("the period of an eventually periodic point cannot be empty")
        values = self.prefix + self.period
        if self.domain == "bits" and any(v not in (0, 1) for v in values):
            raise InvalidPointError("points of 2^omega take values 0 and 1 only")
        if self.domain == "interval":
            if self.interval is None:
                raise InvalidPointError("an interval-valued point needs its interval")
            outside = [v for v in values if not self.interval.contains(v)]
            if outside:
                raise InvalidPointError(f"values {outside} lie outside ]{self.interval.lo}, {self.interval.hi}[")
        return self

    def value(self, k: int) -> Fraction:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def values(self, n: int) -> List[Fraction]:
        return [self.value(k) for k in range(n)]


class CycleListPoint(FrozenModel):
    """A point of P^omega cycling through `values` forever."""

    values: Tuple[Rational, ...]
    interval: OpenInterval

    @model_validator(mode="after")
    def _check_values(self):
        if not self.values:
            raise InvalidPointError("a cycle-list point needs at least one value")
        outside = [v for v in self.values if not self.interval.contains(v)]
        if outside:
            raise InvalidPointError(f"values {outside} lie outside ]{self.interval.lo}, {self.interval.hi}[")
        return self

    @property
    def value_set(self) -> FrozenSet[Fraction]:
        return frozenset(self.values)


# ---------------------------------------------------------------------------
# Schedules and descriptors
# ---------------------------------------------------------------------------

class ParamSchedule(FrozenModel):
    """Sequences (K_n), (p_n), n = 1..n_max; every sequence is stored 0-based."""

    flavor: Literal["lp", "c0"]
    base_p: float
    n_max: int
    K: Tuple[Optional[int], ...]
    log_K: Tuple[float, ...]
    p_seq: Tuple[float, ...]
    margin: Optional[float] = None
    growth: Optional[float] = None

    @model_validator(mode="before")
    @classmethod
    def _fill_logs(cls, data):
        if isinstance(data, dict) and data.get("log_K") is None and data.get("K") is not None:
            data = dict(data)
            if any(k is None for k in data["K"]):
                raise InvalidInputError("log K_n is required where K_n is not stored exactly")
            data["log_K"] = tuple(math.log(k) if k >= 1 else float("nan") for k in data["K"])
        return data

    @model_validator(mode="after")
    def _check_shape(self):
        if self.n_max < 1:
            raise InvalidInputError(f"n_max must be >= 1, got {self.n_max}")
        for name in ("K", "log_K", "p_seq"):
            if len(getattr(self, name)) != self.n_max:
                raise InvalidInputError(f"{name} must have n_max = {self.n_max} entries")
        for k in self.K:
            if k is not None and k < 1:
                raise InvalidInputError(f"K_n must be positive integers, got {k}")
        return self

    def k_exact(self, n: int) -> Optional[int]:
        return self.K[n - 1]

    def log_k(self, n: int) -> float:
        return self.log_K[n - 1]

    def p(self, n: int) -> float:
        return self.p_seq[n - 1]


class SpaceDescriptor(FrozenModel):
    """l_p(l_{p_n}^{K_n}(alpha)) or c0(l_{p_n}^{K_n}(alpha)) truncated at n_max."""

    space: SumSpace
    schedule: ParamSchedule
    point: PointX0
    exponents: Tuple[float, ...]

    def exponent(self, n: int) -> float:
        return self.exponents[n - 1]


class LpSumDescriptor(FrozenModel):
    """An l_p-sum in which every l_q, q in `parts`, is repeated infinitely often."""

    base_p: Rational
    parts: Tuple[Rational, ...]

    @model_validator(mode="after")
    def _check_parts(self):
        if list(self.parts) != sorted(set(self.parts)):
            raise InvalidInputError("parts must be sorted and distinct")
        if self.base_p in self.parts:
            raise InvalidInputError("the base exponent cannot be one of the parts")
        return self

    @property
    def part_set(self) -> FrozenSet[Fraction]:
        return frozenset(self.parts)


class DirectSumDescriptor(FrozenModel):
    left: SpaceDescriptor
    right: LpSumDescriptor
    p: Rational

    @property
    def left_base(self) -> Fraction:
        return (self.p + 1) / 2


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

class OracleResult(FrozenModel):
    flat_max: float
    sample_max: float
    samples: int

    @property
    def value(self) -> float:
        return max(self.flat_max, self.sample_max)


class BoundsCheck(FrozenModel):
    lower: float
    upper: float
    constant: float
    holds: bool


class InequalityCheck(FrozenModel):
    lhs: float
    rhs: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


class ClauseResult(FrozenModel):
    clause: str
    holds: bool
    slack: float


class GapRow(FrozenModel):
    n: int
    gap: float
    bound: float
    holds: bool


class ChainRow(FrozenModel):
    step: str
    lhs: float
    rhs: float
    holds: bool


class CaseResult(FrozenModel):
    suite: str
    case_id: str
    inputs_digest: str
    lhs: float
    rhs: float
    holds: bool
    slack: float


class RunConfig(FrozenModel):
    seed: int = 0
    tolerance: float = TOLERANCE
    n_max: int = 12
    margin: float = 0.5
    oracle_bound: int = 64
    max_log_k: float = 5e5
    cases: int = 1000
    samples: int = 10000
    workers: int = 4
    out: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        if not self.tolerance > 0:
            raise InvalidInputError(f"tolerance must be > 0, got {self.tolerance}")
        if self.n_max < 1:
            raise InvalidInputError(f"n_max must be >= 1, got {self.n_max}")
        if self.oracle_bound < 1 or self.cases < 1 or self.samples < 1 or self.workers < 1:
            raise InvalidInputError("oracle_bound, cases, samples and workers must be >= 1")
        if not 0 < self.margin < 1:
            raise InvalidInputError(f"margin must lie in (0, 1), got {self.margin}")
        if not self.max_log_k > 0:
            raise InvalidInputError(f"max_log_k must be > 0, got {self.max_log_k}")
        return self


# ---------------------------------------------------------------------------
# HTTP requests
# ---------------------------------------------------------------------------

class ScheduleRequest(BaseModel):
    flavor: Literal["lp", "c0"] = "lp"
    base_p: float
    n_max: Optional[int] = None
    margin: Optional[float] = None


class DecideRequest(BaseModel):
    a: Dict[str, Any]
    b: Dict[str, Any]


class ReduceRequest(BaseModel):
    point: Dict[str, Any]
    schedule: Optional[Dict[str, Any]] = None
    base_p: Optional[str] = None
    p: Optional[str] = None
    cycle: Optional[Dict[str, Any]] = None


class VerifyRequest(BaseModel):
    seed: Optional[int] = None
    cases: Optional[int] = None
    n_max: Optional[int] = None
    samples: Optional[int] = None
    schedule: Optional[Dict[str, Any]] = None
