# utils.py
import hashlib
import json
import math
from fractions import Fraction
from typing import Any, Union

TOLERANCE = 1e-9

Number = Union[int, float, Fraction, str]


def within(lhs: float, rhs: float, tol: float = TOLERANCE) -> bool:
    """lhs <= rhs up to a relative slack of `tol` (both sides nonnegative)."""
    if math.isinf(rhs) and rhs > 0:
        return True
    return lhs <= rhs * (1.0 + tol) + (tol if rhs == 0.0 else 0.0)


def relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def to_fraction(value: Any) -> Fraction:
    """Exact rational from JSON-ish input; floats are read through their decimal text."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite rational: {value}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise ValueError(f"rational with zero denominator: {value!r}")
    if isinstance(value, dict) and "num" in value and "den" in value:
        if int(value["den"]) == 0:
            raise ValueError("rational with zero denominator")
        return Fraction(int(value["num"]), int(value["den"]))
    raise ValueError(f"cannot read a rational from {value!r}")


def derive_seed(seed: int, case_id: str) -> int:
    """Per-case sub-seed; independent of scheduling order and of PYTHONHASHSEED."""
    digest = hashlib.sha256(f"{seed}:{case_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def inputs_digest(payload: Any) -> str:
    text = json.dumps(payload, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")
