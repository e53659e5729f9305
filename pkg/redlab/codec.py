# codec.py
"""JSON forms of points, schedules, descriptors and verdicts.

Floats are written with 17 significant digits; non-finite floats become the
strings "inf", "-inf" and "nan". Rationals are {"num": ..., "den": ...}.
"""
import json
import logging
import math
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from .errors import InvalidInputError, InvalidPointError, RedlabError, TypeMismatchError
from .models import (
    AffineTail,
    ConstantTail,
    CycleListPoint,
    DirectSumDescriptor,
    LpSumDescriptor,
    OpenInterval,
    ParamSchedule,
    PeriodicPoint,
    PeriodicSlopeTail,
    PointX0,
    SpaceDescriptor,
)
from .reductions import totally_incomparable
from .relations import H0Verdict
from .utils import format_float, to_fraction

logger = logging.getLogger(__name__)

Point = Union[PointX0, PeriodicPoint, CycleListPoint]

SPACES = ("X0", "Cantor", "RSeq", "Pomega")
RELATION_SPACES = {"H0": "X0", "E0": "Cantor", "E1": "RSeq", "=+": "Pomega"}


def space_name(point: Point) -> str:
    if isinstance(point, PointX0):
        return "X0"
    if isinstance(point, CycleListPoint):
        return "Pomega"
    return "Cantor" if point.domain == "bits" else "RSeq"


def require_relation_space(relation: str, points: Dict[str, Point]) -> None:
    """Raise TypeMismatchError unless every point lives in the space `relation` compares."""
    expected = RELATION_SPACES[relation]
    for label, point in points.items():
        space = space_name(point)
        if space != expected:
            raise TypeMismatchError(f"{relation} compares {expected} points, {label} holds a {space} point")


def dumps(payload: Any) -> str:
    """json.dumps with every float rendered through format_float."""
    floats: Dict[str, str] = {}

    def mark(value: Any) -> Any:
        if isinstance(value, bool) or value is None:
            return value
        if isinstance(value, float):
            if not math.isfinite(value):
                return format_float(value)
            token = f"__float_{len(floats)}__"
            floats[token] = format_float(value)
            return token
        if isinstance(value, dict):
            return {key: mark(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [mark(item) for item in value]
        return value

    text = json.dumps(mark(payload), indent=2, ensure_ascii=False)
    for token, rendered in floats.items():
        text = text.replace(f'"{token}"', rendered)
    return text + "\n"


def encode_rational(value: Fraction) -> Dict[str, int]:
    return {"num": value.numerator, "den": value.denominator}


def _rationals(values) -> list:
    return [encode_rational(v) for v in values]


def encode_interval(interval: OpenInterval) -> Dict[str, Any]:
    return {"lo": encode_rational(interval.lo), "hi": encode_rational(interval.hi)}


def encode_tail(tail) -> Dict[str, Any]:
    if isinstance(tail, ConstantTail):
        return {"type": "constant", "c": tail.c}
    if isinstance(tail, AffineTail):
        return {"type": "affine", "r": encode_rational(tail.r)}
    return {"type": "periodic", "slopes": _rationals(tail.slopes)}


def encode_point(point: Point) -> Dict[str, Any]:
    if isinstance(point, PointX0):
        return {"space": "X0", "prefix": list(point.prefix), "tail": encode_tail(point.tail)}
    if isinstance(point, PeriodicPoint):
        space = "Cantor" if point.domain == "bits" else "RSeq"
        data = {"space": space, "prefix": _rationals(point.prefix), "period": _rationals(point.period)}
        if space == "Cantor":
            data["prefix"] = [int(v) for v in point.prefix]
            data["period"] = [int(v) for v in point.period]
        if point.interval is not None:
            data["interval"] = encode_interval(point.interval)
        return data
    return {"space": "Pomega", "values": _rationals(point.values), "interval": encode_interval(point.interval)}


def _decode_tail(data: Optional[Dict[str, Any]]):
    if data is None:
        return ConstantTail()
    kind = data.get("type")
    if kind == "constant":
        return ConstantTail(c=int(data.get("c", 0)))
    if kind == "affine":
        return AffineTail(r=data["r"])
    if kind == "periodic":
        return PeriodicSlopeTail(slopes=tuple(data["slopes"]))
    raise InvalidPointError(f"unknown tail type {kind!r}")


def _decode_interval(data: Dict[str, Any]) -> Optional[OpenInterval]:
    if "interval" in data:
        return OpenInterval(lo=data["interval"]["lo"], hi=data["interval"]["hi"])
    if "base_p" in data:
        return OpenInterval.for_base(data["base_p"])
    return None


def decode_point(data: Dict[str, Any]) -> Point:
    """Point from its JSON form; malformed input raises InvalidPointError."""
    if not isinstance(data, dict):
        raise InvalidPointError("a point must be a JSON object")
    space = data.get("space")
    try:
        if space == "X0":
            return PointX0(prefix=tuple(int(v) for v in data.get("prefix", [])), tail=_decode_tail(data.get("tail")))
        if space in ("Cantor", "RSeq"):
            interval = _decode_interval(data)
            domain = "bits" if space == "Cantor" else ("interval" if interval is not None else "rationals")
            return PeriodicPoint(
                domain=domain,
                prefix=tuple(data.get("prefix", [])),
                period=tuple(data["period"]),
                interval=interval,
            )
        if space == "Pomega":
            interval = _decode_interval(data)
            if interval is None:
                raise InvalidPointError("a Pomega point needs an interval or a base_p")
            return CycleListPoint(values=tuple(data["values"]), interval=interval)
    except RedlabError:
        raise
    except (ValidationError, KeyError, TypeError, ValueError) as e:
        raise InvalidPointError(f"malformed {space} point: {e}")
    raise InvalidPointError(f"unknown space {space!r}; expected one of {SPACES}")


def encode_schedule(s: ParamSchedule) -> Dict[str, Any]:
    return {
        "flavor": s.flavor,
        "base_p": s.base_p,
        "n_max": s.n_max,
        "margin": s.margin,
        "growth": s.growth,
        "K": list(s.K),
        "logK": list(s.log_K),
        "p": list(s.p_seq),
    }


def decode_schedule(data: Dict[str, Any]) -> ParamSchedule:
    if not isinstance(data, dict):
        raise InvalidInputError("a schedule must be a JSON object")
    try:
        return ParamSchedule(
            flavor=data["flavor"],
            base_p=data["base_p"],
            n_max=data["n_max"],
            K=tuple(data["K"]),
            log_K=tuple(data["logK"]) if data.get("logK") is not None else None,
            p_seq=tuple(data["p"]),
            margin=data.get("margin"),
            growth=data.get("growth"),
        )
    except RedlabError:
        raise
    except (ValidationError, KeyError, TypeError) as e:
        raise InvalidInputError(f"malformed schedule: {e}")


def encode_space_descriptor(d: SpaceDescriptor) -> Dict[str, Any]:
    outer = d.space.outer
    return {
        "outer": {"type": "lp", "p": outer.exponent.as_float} if outer.kind == "lp" else {"type": "c0"},
        "blocks": [
            {"p": block.exponent.as_float, "K": block.dim, "logK": block.log_dim} for block in d.space.blocks
        ],
        "provenance": {"schedule": encode_schedule(d.schedule), "point": encode_point(d.point)},
    }


def encode_lp_sum(d: LpSumDescriptor) -> Dict[str, Any]:
    return {"type": "lp_infinity_sum", "base_p": encode_rational(d.base_p), "parts": _rationals(d.parts)}


def encode_direct_sum(h: DirectSumDescriptor) -> Dict[str, Any]:
    return {
        "type": "direct_sum",
        "p": encode_rational(h.p),
        "left": encode_space_descriptor(h.left),
        "right": encode_lp_sum(h.right),
        "totally_incomparable": totally_incomparable(h),
    }


def encode_descriptor(d: Union[SpaceDescriptor, LpSumDescriptor, DirectSumDescriptor]) -> Dict[str, Any]:
    if isinstance(d, SpaceDescriptor):
        return encode_space_descriptor(d)
    if isinstance(d, LpSumDescriptor):
        return encode_lp_sum(d)
    return encode_direct_sum(d)


def encode_verdict(related: bool, witness: Optional[int] = None, verdict: Any = None) -> Dict[str, Any]:
    data: Dict[str, Any] = {"related": related}
    if witness is not None:
        data["witness"] = witness
    if isinstance(verdict, H0Verdict) and not verdict.related:
        data["divergence"] = {
            "residue": verdict.residue,
            "modulus": verdict.modulus,
            "slope_gap": encode_rational(verdict.slope_gap),
        }
    return data


def read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path} is not valid JSON: {e}")
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e}")


def rational_arg(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except ValueError as e:
        raise InvalidInputError(str(e))
