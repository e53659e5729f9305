import json
import math
from fractions import Fraction

import pytest

from redlab.codec import (
    decode_point,
    decode_schedule,
    dumps,
    encode_descriptor,
    encode_point,
    encode_schedule,
    encode_verdict,
    rational_arg,
    read_json,
    require_relation_space,
    space_name,
)
from redlab.errors import InvalidInputError, InvalidPointError, TypeMismatchError
from redlab.models import AffineTail, PeriodicSlopeTail, PointX0
from redlab.reductions import space_for, x_alpha
from redlab.relations import h0_decide


def test_dumps_keeps_full_precision():
    text = dumps({"x": 0.1, "big": math.inf, "n": 3, "flag": True})
    assert '"x": 0.10000000000000001' in text
    assert json.loads(text) == {"x": 0.1, "big": "inf", "n": 3, "flag": True}


def test_decode_x0_point():
    point = decode_point({"space": "X0", "prefix": [0, 1, 1], "tail": {"type": "affine", "r": {"num": 1, "den": 2}}})
    assert point == PointX0(prefix=(0, 1, 1), tail=AffineTail(r=Fraction(1, 2)))
    assert space_name(point) == "X0"


def test_decode_periodic_tail_from_strings():
    point = decode_point({"space": "X0", "tail": {"type": "periodic", "slopes": ["1/3", 1]}})
    assert point.tail == PeriodicSlopeTail(slopes=(Fraction(1, 3), Fraction(1)))


def test_decode_cycle_point_from_base():
    point = decode_point({"space": "Pomega", "values": ["3/2", 1.75], "base_p": 1})
    assert point.interval.lo == 1 and point.interval.hi == 2
    assert point.value_set == {Fraction(3, 2), Fraction(7, 4)}
    assert space_name(point) == "Pomega"


def test_point_json_survives_encoding(cycle_point):
    for point in (
        cycle_point,
        decode_point({"space": "Cantor", "prefix": [1, 0], "period": [0, 1]}),
        decode_point({"space": "RSeq", "period": ["-1", "2/7"]}),
    ):
        assert decode_point(json.loads(dumps(encode_point(point)))) == point


@pytest.mark.parametrize(
    "data",
    [
        {"space": "X0", "prefix": [1]},
        {"space": "X0", "tail": {"type": "spiral"}},
        {"space": "Cantor", "period": [2]},
        {"space": "Cantor", "period": []},
        {"space": "Pomega", "values": ["3/2"]},
        {"space": "Pomega", "values": ["5/2"], "base_p": 1},
        {"space": "Hilbert"},
        [1, 2],
    ],
)
def test_malformed_points(data):
    with pytest.raises(InvalidPointError):
        decode_point(data)


def test_relation_space_check():
    x0 = decode_point({"space": "X0"})
    cantor = decode_point({"space": "Cantor", "period": [1]})
    require_relation_space("H0", {"a": x0, "b": x0})
    with pytest.raises(TypeMismatchError):
        require_relation_space("E0", {"a": cantor, "b": x0})
    assert space_name(decode_point({"space": "RSeq", "period": [3]})) == "RSeq"


def test_schedule_json(lp_schedule):
    data = json.loads(dumps(encode_schedule(lp_schedule)))
    assert data["K"][-1] is None
    assert decode_schedule(data) == lp_schedule


def test_malformed_schedule():
    with pytest.raises(InvalidInputError):
        decode_schedule({"flavor": "lp", "base_p": 1.5})


def test_descriptor_json(lp_schedule, cycle_point):
    space = encode_descriptor(space_for(PointX0(), lp_schedule))
    assert space["outer"] == {"type": "lp", "p": 1.5}
    assert len(space["blocks"]) == 8
    lp_sum = encode_descriptor(x_alpha(cycle_point, 1))
    assert lp_sum == {
        "type": "lp_infinity_sum",
        "base_p": {"num": 1, "den": 1},
        "parts": [{"num": 3, "den": 2}, {"num": 7, "den": 4}],
    }


def test_verdict_json():
    verdict = h0_decide(PointX0(), PointX0(tail=AffineTail(r=1)))
    data = encode_verdict(False, None, verdict)
    assert data["related"] is False
    assert data["divergence"]["slope_gap"] == {"num": 1, "den": 1}
    assert encode_verdict(True, 5) == {"related": True, "witness": 5}


def test_read_json(tmp_path):
    good = tmp_path / "a.json"
    good.write_text('{"space": "X0"}', encoding="utf-8")
    assert read_json(str(good)) == {"space": "X0"}
    bad = tmp_path / "b.json"
    bad.write_text("{", encoding="utf-8")
    with pytest.raises(InvalidInputError):
        read_json(str(bad))
    with pytest.raises(InvalidInputError):
        read_json(str(tmp_path / "missing.json"))


def test_rational_arg():
    assert rational_arg("3/2") == Fraction(3, 2)
    assert rational_arg("1.25") == Fraction(5, 4)
    with pytest.raises(InvalidInputError):
        rational_arg("one")
