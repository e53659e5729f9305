from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from redlab import sampling
from redlab.errors import DomainMismatchError, InvalidInputError, TypeMismatchError
from redlab.models import AffineTail, ConstantTail, CycleListPoint, OpenInterval, PeriodicPoint, PeriodicSlopeTail, PointX0
from redlab.relations import (
    DECIDERS,
    e0_decide,
    e1_decide,
    eplus_decide,
    h0_decide,
    holds,
    j_embed,
    product_decide,
)
from redlab.verification import brute_eventual, brute_h0

bits = st.lists(st.integers(min_value=0, max_value=1), max_size=6)
periods = st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=4)
cantor_points = st.builds(lambda prefix, period: PeriodicPoint(prefix=tuple(prefix), period=tuple(period)), bits, periods)

slopes = st.sampled_from([Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)])
tails = st.one_of(
    st.builds(ConstantTail, c=st.integers(min_value=0, max_value=6)),
    st.builds(AffineTail, r=slopes),
    st.builds(lambda s: PeriodicSlopeTail(slopes=tuple(s)), st.lists(slopes, min_size=1, max_size=3)),
)


@st.composite
def x0_points(draw):
    length = draw(st.integers(min_value=0, max_value=6))
    prefix = tuple(draw(st.integers(min_value=0, max_value=i)) for i in range(length))
    return PointX0(prefix=prefix, tail=draw(tails))


def test_h0_constant_gap():
    verdict = h0_decide(PointX0(), PointX0(tail=ConstantTail(c=5)))
    assert verdict.related
    assert verdict.witness == 5


def test_h0_prefix_difference():
    a = PointX0(prefix=(0, 1, 2, 3))
    b = PointX0(prefix=(0, 0, 0, 0))
    verdict = h0_decide(a, b)
    assert verdict.related and verdict.witness == 3


def test_h0_different_slopes_are_unrelated():
    a, b = PointX0(), PointX0(tail=AffineTail(r=Fraction(1, 2)))
    verdict = h0_decide(a, b)
    assert not verdict.related
    assert verdict.slope_gap == Fraction(1, 2)
    k = verdict.certificate(10)
    assert abs(a.coordinate(k) - b.coordinate(k)) > 10


def test_h0_periodic_slopes_differ_on_one_residue():
    a = PointX0(tail=PeriodicSlopeTail(slopes=(Fraction(1), Fraction(0))))
    b = PointX0(tail=AffineTail(r=1))
    verdict = h0_decide(a, b)
    assert not verdict.related
    assert verdict.modulus == 2 and verdict.residue == 1
    k = verdict.certificate(100)
    assert abs(a.coordinate(k) - b.coordinate(k)) > 100


def test_certificate_needs_unrelated_points():
    with pytest.raises(InvalidInputError):
        h0_decide(PointX0(), PointX0()).certificate(3)


@given(x0_points(), x0_points())
def test_h0_matches_brute_force(a, b):
    verdict = h0_decide(a, b)
    related, witness = brute_h0(a, b)
    assert verdict.related == related
    if related:
        assert verdict.witness == witness


@given(x0_points(), x0_points(), x0_points())
def test_h0_is_an_equivalence(a, b, c):
    assert h0_decide(a, a).related
    assert h0_decide(a, b).related == h0_decide(b, a).related
    ab, bc = h0_decide(a, b), h0_decide(b, c)
    if ab.related and bc.related:
        ac = h0_decide(a, c)
        assert ac.related and ac.witness <= ab.witness + bc.witness


def test_e0_eventual_equality():
    a = PeriodicPoint(prefix=(1, 0), period=(0, 1))
    assert e0_decide(a, PeriodicPoint(period=(0, 1)))
    assert not e0_decide(a, PeriodicPoint(period=(1, 0)))


@given(cantor_points, cantor_points)
def test_e0_matches_brute_force(a, b):
    assert e0_decide(a, b) == brute_eventual(a, b)


def test_e0_rejects_rational_points():
    rational = PeriodicPoint(domain="rationals", period=(Fraction(1, 2),))
    with pytest.raises(TypeMismatchError):
        e0_decide(rational, rational)


def test_e1_on_rationals():
    a = PeriodicPoint(domain="rationals", prefix=(Fraction(7),), period=(Fraction(1, 3), Fraction(2)))
    b = PeriodicPoint(domain="rationals", prefix=(Fraction(5), Fraction(1, 3), Fraction(2)), period=(Fraction(1, 3), Fraction(2)))
    assert e1_decide(a, b)
    with pytest.raises(TypeMismatchError):
        e1_decide(PeriodicPoint(period=(1,)), PeriodicPoint(period=(1,)))


def test_eplus_compares_value_sets(cycle_point, cycle_interval):
    same = CycleListPoint(values=(Fraction(3, 2), Fraction(7, 4)), interval=cycle_interval)
    other = CycleListPoint(values=(Fraction(3, 2),), interval=cycle_interval)
    assert eplus_decide(cycle_point, same)
    assert not eplus_decide(cycle_point, other)


def test_eplus_needs_one_interval(cycle_point):
    elsewhere = CycleListPoint(values=(Fraction(7, 4),), interval=OpenInterval.for_base(Fraction(1)))
    with pytest.raises(DomainMismatchError):
        eplus_decide(cycle_point, elsewhere)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32))
def test_eplus_ignores_order_and_repetition(seed):
    rng = np.random.default_rng(seed)
    interval = OpenInterval.above(Fraction(5, 4))
    pool = sampling.interval_pool(interval)
    b, c = sampling.random_cycle_point(rng, interval, pool), sampling.random_cycle_point(rng, interval, pool)
    shuffled = sampling.shuffled_partner(rng, b)
    assert eplus_decide(b, shuffled)
    assert eplus_decide(shuffled, c) == eplus_decide(b, c)


def test_j_embed_coordinates():
    image = j_embed(PeriodicPoint(prefix=(1, 0), period=(1,)))
    # (0, 1*a(0), 2*a(1), 3*a(2), ...)
    assert image.coordinates(6) == [0, 1, 0, 3, 4, 5]


@given(cantor_points, cantor_points)
def test_j_embed_reduces_e0_to_h0(a, b):
    assert e0_decide(a, b) == h0_decide(j_embed(a), j_embed(b)).related


def test_product_of_relations(cycle_point, cycle_interval):
    shuffled = CycleListPoint(values=(Fraction(3, 2), Fraction(7, 4)), interval=cycle_interval)
    near = PointX0(prefix=(0, 1))
    assert product_decide("H0", "=+", (PointX0(), cycle_point), (near, shuffled))
    assert not product_decide("H0", "=+", (PointX0(), cycle_point), (PointX0(tail=AffineTail(r=1)), shuffled))
    assert product_decide(e0_decide, DECIDERS["E0"], (PeriodicPoint(period=(1,)),) * 2, (PeriodicPoint(prefix=(0,), period=(1,)),) * 2)


def test_product_needs_pairs():
    with pytest.raises(TypeMismatchError):
        product_decide("H0", "H0", (PointX0(),), (PointX0(), PointX0()))


def test_holds_reads_both_verdict_kinds():
    assert holds(True)
    assert not holds(h0_decide(PointX0(), PointX0(tail=AffineTail(r=1))))
