import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from redlab import sampling
from redlab.errors import (
    DescriptorOnlyError,
    InvalidExponentsError,
    InvalidInputError,
    NotDisjointError,
    NotSuccessiveError,
    OracleBoundExceededError,
)
from redlab.models import BlockSpec, BlockVector, Exponent, OuterNorm, SumSpace
from redlab.norms import (
    check_lower_p_estimate,
    eq_const_closed_form,
    eq_const_oracle,
    lemma_2_1_bounds,
    lemma_2_4_check,
    log_eq_const,
    lp_norm,
    lp_norms,
    oracle_profile,
    sum_norm,
)

exponents = st.one_of(st.floats(min_value=1.0, max_value=64.0), st.just("inf"))
coefficients = st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=12)


def test_lp_norm_pythagoras():
    assert lp_norm([3.0, 4.0], 2) == pytest.approx(5.0)


def test_lp_norm_endpoints():
    assert lp_norm([1.0, -2.0, 3.0], 1) == pytest.approx(6.0)
    assert lp_norm([1.0, -2.0, 3.0], "inf") == 3.0
    assert lp_norm([0.0, 0.0], 1.5) == 0.0


def test_lp_norm_rejects_empty():
    with pytest.raises(InvalidInputError):
        lp_norm([], 2)


def test_lp_norms_rescales_huge_entries():
    rows = np.array([[1e300, 1e300], [3.0, 4.0]])
    norms = lp_norms(rows, 2)
    assert norms[0] == pytest.approx(math.sqrt(2) * 1e300)
    assert norms[1] == pytest.approx(5.0)


@given(coefficients, exponents, exponents)
def test_lp_norm_monotone_in_exponent(values, p, q):
    p, q = Exponent.of(p), Exponent.of(q)
    small, large = sorted((p, q), key=lambda e: e.as_float)
    assert lp_norm(values, large) <= lp_norm(values, small) * (1 + 1e-9) + 1e-300


@given(coefficients, exponents, exponents)
def test_lp_norm_upper_holder_bound(values, p, q):
    small, large = sorted((Exponent.of(p), Exponent.of(q)), key=lambda e: e.as_float)
    bound = eq_const_closed_form(small, large, len(values)) * lp_norm(values, large)
    assert lp_norm(values, small) <= bound * (1 + 1e-9) + 1e-300


def test_exponent_conjugates():
    assert Exponent.of(2).dual == 2.0
    assert Exponent.of(1).dual == "inf"
    assert Exponent.infinity().conjugate() == Exponent.of(1)
    assert Exponent.of("∞").is_infinite
    with pytest.raises(InvalidInputError):
        Exponent.of(0.5)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32))
def test_conjugate_is_an_involution(seed):
    rng = np.random.default_rng(seed)
    for _ in range(200):
        e = sampling.random_exponent(rng)
        back = e.conjugate().conjugate()
        assert (back.value, back.dual) == (e.value, e.dual)
        assert e.inverse + e.dual_inverse == pytest.approx(1.0, abs=1e-12)


def test_conjugation_and_direct_construction_agree():
    assert Exponent.of(6).conjugate() == Exponent.of(1.2)
    assert hash(Exponent.of(6).conjugate()) == hash(Exponent.of(1.2))
    assert Exponent.of(1.2).dual == 6.0
    assert Exponent.of(3).conjugate() == Exponent.of(1.5)
    assert Exponent.of(1.2) != Exponent.of(1.25)


def test_conjugated_outer_exponent_is_the_same_space():
    space = SumSpace.build(OuterNorm.lp(Exponent.of(6).conjugate()), [(2, 2)])
    assert space == SumSpace.build(OuterNorm.lp(1.2), [(2, 2)])
    assert lemma_2_4_check([BlockVector.unit(space, 0, 0)], 1.2).holds


def test_sum_norm_nested():
    space = SumSpace.build(OuterNorm.lp(2), [(1, 2), (1, 2)])
    v = BlockVector.from_blocks(space, [[1, 1], [1, 1]])
    assert sum_norm(v) == pytest.approx(2 * math.sqrt(2))


def test_sum_norm_c0_is_max_of_blocks():
    space = SumSpace.build(OuterNorm.c0(), [(2, 2), (1, 3)])
    v = BlockVector.from_blocks(space, [[3, 4], [1, 1, 1]])
    assert sum_norm(v) == pytest.approx(5.0)


@settings(max_examples=50, deadline=None)
@given(
    st.integers(min_value=0, max_value=2 ** 32),
    st.floats(min_value=-1e3, max_value=1e3, allow_nan=False),
    st.booleans(),
)
def test_sum_norm_is_a_norm(seed, t, c0):
    rng = np.random.default_rng(seed)
    space = sampling.random_space(rng, float(rng.uniform(1.0, 2.0)), c0=c0)
    u, v = sampling.random_vector(rng, space), sampling.random_vector(rng, space)
    assert sum_norm(u.scaled(t)) == pytest.approx(abs(t) * sum_norm(u), rel=1e-9, abs=1e-12)
    assert sum_norm(u + v) <= (sum_norm(u) + sum_norm(v)) * (1 + 1e-9) + 1e-12


def test_space_total_dimension():
    space = SumSpace.build(OuterNorm.lp(1.5), [(1.5, 3), (2, 5)])
    assert space.total_dim == 8
    assert space.total_log_dim == pytest.approx(math.log(8))
    huge = BlockSpec(exponent=Exponent.of(2), log_dim=100.0)
    descriptor = SumSpace(outer=OuterNorm.lp(1.5), blocks=(huge, huge))
    assert descriptor.total_dim is None
    assert descriptor.total_log_dim == pytest.approx(100.0 + math.log(2))


def test_vectors_need_exact_dimensions():
    space = SumSpace(outer=OuterNorm.lp(1.5), blocks=(BlockSpec(exponent=Exponent.of(2), log_dim=100.0),))
    with pytest.raises(DescriptorOnlyError):
        BlockVector.zeros(space)


def test_closed_form_constant():
    assert eq_const_closed_form(1, 2, 4) == pytest.approx(2.0)
    assert eq_const_closed_form(2, 2, 10 ** 6) == 1.0
    assert eq_const_closed_form(1, "inf", 7) == pytest.approx(7.0)


def test_log_constant_matches_high_precision():
    log_k = 1e5
    mpmath.mp.dps = 50
    expected = mpmath.log(mpmath.power(mpmath.e, log_k) ** (mpmath.mpf(1) / mpmath.mpf("1.25") - mpmath.mpf(1) / 2))
    assert log_eq_const(1.25, 2, log_k) == pytest.approx(float(expected), rel=1e-12)
    assert eq_const_closed_form(1, 2, 10 ** 300) == pytest.approx(1e150, rel=1e-9)


def test_oracle_matches_closed_form():
    result = oracle_profile(1.5, 3, 8, samples=500, seed=3)
    assert result.value == pytest.approx(2.0, rel=1e-9)
    assert result.sample_max <= 2.0 * (1 + 1e-9)


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from([1.0, 1.2, 1.5, 2.0, 3.0, "inf"]),
    st.sampled_from([1.0, 1.2, 1.5, 2.0, 3.0, "inf"]),
    st.integers(min_value=1, max_value=16),
    st.integers(min_value=0, max_value=2 ** 32),
)
def test_oracle_never_beats_closed_form(p, q, K, seed):
    closed = eq_const_closed_form(p, q, K)
    value = eq_const_oracle(p, q, K, samples=100, seed=seed)
    assert value == pytest.approx(closed, rel=1e-6)


def test_oracle_bound():
    with pytest.raises(OracleBoundExceededError):
        oracle_profile(1, 2, 65, samples=10, seed=0)


def test_block_norm_bounds_sandwich():
    check = lemma_2_1_bounds(1, 2, 4, 2)
    assert check.lower == pytest.approx(4 ** 0.25)
    assert check.upper == pytest.approx(4.0)
    assert check.constant == pytest.approx(2.0)
    assert check.holds


@given(
    st.floats(min_value=1.0, max_value=4.0),
    st.floats(min_value=1.0, max_value=4.0),
    st.integers(min_value=1, max_value=10 ** 9),
)
def test_block_norm_bounds_hold_everywhere(p, q, K):
    assert lemma_2_1_bounds(p, q, K, max(p, q)).holds


def test_block_norm_bounds_reject_small_c():
    with pytest.raises(InvalidInputError):
        lemma_2_1_bounds(1.5, 3.0, 4, 2.0)


def test_lower_p_estimate_c0():
    space = SumSpace.build(OuterNorm.c0(), [(1, 1), (1, 1)])
    vectors = [BlockVector.unit(space, 0, 0), BlockVector.unit(space, 1, 0)]
    assert check_lower_p_estimate(vectors, 1) == pytest.approx(2.0)


def test_lower_p_estimate_lp_is_one():
    space = SumSpace.build(OuterNorm.lp(1.5), [(1.5, 2), (2, 2)])
    vectors = [BlockVector.from_blocks(space, [[1, 2], [0, 0]]), BlockVector.from_blocks(space, [[0, 0], [3, 1]])]
    assert check_lower_p_estimate(vectors, 1.5) == pytest.approx(1.0)


def test_lower_p_estimate_needs_successive_vectors():
    space = SumSpace.build(OuterNorm.lp(1), [(1, 1), (1, 1)])
    with pytest.raises(NotSuccessiveError):
        check_lower_p_estimate([BlockVector.unit(space, 1, 0), BlockVector.unit(space, 0, 0)], 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32))
def test_successive_decompositions_have_lower_estimate_one(seed):
    rng = np.random.default_rng(seed)
    p = float(rng.uniform(1.0, 2.0))
    space = sampling.random_space(rng, p)
    family = sampling.random_successive_family(rng, space)
    assert 1.0 <= check_lower_p_estimate(family, p) <= 1.0 + 1e-9


@pytest.mark.parametrize("r,K,k", [(1.0, 4, 4), (1.5, 8, 5), (2.0, 9, 9)])
def test_disjoint_family_estimate_tight_on_unit_vectors(r, K, k):
    space = SumSpace.build(OuterNorm.lp(r), [(r, K)])
    check = lemma_2_4_check([BlockVector.unit(space, 0, i) for i in range(k)], r)
    assert check.holds
    assert check.lhs == pytest.approx(check.rhs)


def test_disjoint_family_estimate_random_families():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p = float(rng.uniform(1.0, 2.0))
        space = sampling.random_space(rng, p)
        family = sampling.random_disjoint_family(rng, space, int(rng.integers(1, 10)))
        assert all(u.is_disjoint_from(v) for i, u in enumerate(family) for v in family[i + 1:])
        assert lemma_2_4_check(family, p).holds


def test_disjoint_family_estimate_rejects_small_block_exponent():
    space = SumSpace.build(OuterNorm.lp(1.5), [(1.2, 2)])
    with pytest.raises(InvalidExponentsError):
        lemma_2_4_check([BlockVector.unit(space, 0, 0)], 1.5)


def test_disjoint_family_estimate_rejects_overlap():
    space = SumSpace.build(OuterNorm.lp(1), [(1, 2)])
    v = BlockVector.unit(space, 0, 0)
    with pytest.raises(NotDisjointError):
        lemma_2_4_check([v, v], 1)
