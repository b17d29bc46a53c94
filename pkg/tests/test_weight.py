from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from fh_gauss.errors import (BadConfig, DuplicateSingularity, ExponentOutOfRange,
                             SingularEvaluation)
from fh_gauss.weight import WeightSpec, eval_weight, to_mpf, validate


def test_valid_spec():
    spec = WeightSpec((0.0,), (0.5,), 256, "1e-30")
    assert validate(spec) is True
    assert spec.N == 1


def test_exponent_boundary_rejected():
    with pytest.raises(ExponentOutOfRange):
        WeightSpec((0.0,), (-1.0,))


def test_equal_positions_rejected():
    with pytest.raises(DuplicateSingularity):
        WeightSpec((0.3, 0.3), (1, 1))


@pytest.mark.parametrize("kw", [{"precision_bits": 32}, {"quad_tol": 0}, {"quad_tol": "-1e-5"}])
def test_bad_numeric_config(kw):
    with pytest.raises(BadConfig):
        WeightSpec((0.0,), (1,), **kw)


def test_length_mismatch():
    with pytest.raises(BadConfig):
        WeightSpec((0.0, 1.0), (1,))


def test_floats_read_as_decimals():
    assert to_mpf(0.3, 256) == mpf("0.3")
    assert to_mpf(Fraction(1, 3), 256) == mpf(1) / 3


def test_eval_weight_examples():
    assert eval_weight(WeightSpec((0.5,), (1,)), 0) == mpf("0.5")
    assert eval_weight(WeightSpec((0,), (2,)), 0) == 0
    assert eval_weight(WeightSpec((-1, 1), (0, 0)), 2) == mp.exp(-4)


def test_eval_weight_unbounded():
    with pytest.raises(SingularEvaluation):
        eval_weight(WeightSpec((0.2,), (-0.5,)), 0.2)


positions = st.lists(st.decimals(-3, 3, places=3), min_size=1, max_size=3, unique=True).map(sorted)
exponents = st.decimals("-0.99", 4, places=2)


@settings(max_examples=40, deadline=None)
@given(positions, st.data(), st.decimals(-6, 6, places=4))
def test_weight_nonnegative(ts, data, x):
    gs = [data.draw(exponents) for _ in ts]
    spec = WeightSpec(tuple(ts), tuple(gs))
    if any(x == t for t, g in zip(ts, gs) if g < 0):
        return
    assert eval_weight(spec, x) >= 0


@settings(max_examples=40, deadline=None)
@given(positions, st.decimals(-8, 8, places=5))
def test_zero_exponents_give_gaussian(ts, x):
    spec = WeightSpec(tuple(ts), tuple(0 for _ in ts))
    assert eval_weight(spec, x) == mp.exp(-to_mpf(x, 256) ** 2)


@settings(max_examples=40, deadline=None)
@given(st.decimals("0.01", 3, places=3), exponents, exponents, st.decimals(-5, 5, places=4))
def test_symmetric_weight_is_even(a, g, g0, x):
    spec = WeightSpec((-a, 0, a), (g, g0, g))
    assert spec.is_symmetric()
    if x in (a, -a, 0):
        return
    u, v = eval_weight(spec, x), eval_weight(spec, -x)
    assert abs(u - v) <= mpf(2) ** -250 * abs(u)
