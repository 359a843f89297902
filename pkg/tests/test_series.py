from itertools import product

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from dqcurve.series import (
    HSeries, LaurentPoly, VariableError, exp_hbar, make_vars, rational, stirling,
)
from strategies import series

X = make_vars("x")
XI = make_vars("x*")
XY = make_vars("x1*", "x2")


def var(name="x", order=4, vars_=X, power=1):
    return HSeries.var(vars_, order, name, power)


def one(order=4, vars_=X):
    return HSeries.constant(vars_, order, 1)


def test_rational_is_canonical():
    assert rational("6/-4") == mpq(-3, 2)
    assert rational(mpq(0, 7)).denominator == 1
    assert rational(3) == 3


def test_difference_of_squares():
    h, x = HSeries.hbar(X, 2), var(order=2)
    assert (one(2) + h * x) * (one(2) - h * x) == one(2) - h * h * x * x


def test_cauchy_product_truncates():
    h, x = HSeries.hbar(X, 1), var(order=1)
    assert (x + h) * (x + h) == x * x + (h * x).scale(2)


def test_zero_absorbs():
    x = var()
    assert not x * HSeries.zero(X, 4)


def test_mixed_truncation_takes_minimum():
    assert (var(order=3) + var(order=5)).order == 3
    assert (var(order=3) * var(order=5)).order == 3


def test_variable_mismatch_is_rejected():
    with pytest.raises(VariableError):
        var() + HSeries.var(make_vars("y"), 4, "y")


def test_negative_exponent_needs_invertible_variable():
    with pytest.raises(VariableError):
        HSeries.var(X, 3, "x", -1)
    assert HSeries.var(XI, 3, "x", -1).coeff(0).terms == {(-1,): 1}


def test_derive_examples():
    assert var(power=3).derive("x") == var(power=2).scale(3)
    assert var(vars_=XI, power=-1).derive("x") == var(vars_=XI, power=-2).scale(-1)
    h = HSeries.hbar(X, 4)
    assert (var() + h * var(power=2)).derive("x") == one() + (h * var()).scale(2)
    with pytest.raises(VariableError):
        var().derive("y")


def test_euler_examples():
    assert var(power=3).euler("x") == var(power=3).scale(3)
    assert var(vars_=XI, power=-2).euler("x") == var(vars_=XI, power=-2).scale(-2)
    x = var()
    assert x.euler("x").euler("x") == x


def test_dilate_examples():
    x = var(order=2)
    assert x.dilate("x") == x + HSeries.hbar(X, 2) * x + (HSeries.hbar(X, 2, 2) * x).scale(mpq(1, 2))
    assert one().dilate("x") == one()
    x2 = var(power=2)
    assert x2.dilate("x", 1).dilate("x", -1) == x2


def test_translate_examples():
    h = HSeries.hbar(X, 2)
    x = var(order=2)
    assert (x * x).translate("x") == x * x + (h * x).scale(2) + h * h
    c = HSeries.constant(X, 4, mpq(5, 3))
    assert c.translate("x") == c
    x3 = var(power=3)
    assert x3.translate("x", 1).translate("x", -1) == x3


def test_translate_k_steps_is_x_plus_kh():
    # T^k(x^p) = (x + k h)^p, not (x + h)^(k p)
    n = 6
    x, h = var(order=n), HSeries.hbar(X, n)
    for k in range(-3, 4):
        for p in range(5):
            assert (x ** p).translate("x", k) == (x + h.scale(k)) ** p


def test_translate_rejects_invertible_variable():
    with pytest.raises(VariableError):
        var(vars_=XI).translate("x")


def test_exp_hbar_examples():
    assert exp_hbar(0, 5) == HSeries.constant((), 5, 1)
    h = HSeries.hbar((), 3)
    assert exp_hbar(1, 3) == HSeries.constant((), 3, 1) + h + (h * h).scale(mpq(1, 2)) + (h ** 3).scale(mpq(1, 6))
    assert exp_hbar(1, 7) * exp_hbar(-1, 7) == HSeries.constant((), 7, 1)


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@pytest.mark.parametrize("k", range(7))
def test_stirling_matches_partition_count(k):
    counts = {}
    for part in _partitions(list(range(k))):
        counts[len(part)] = counts.get(len(part), 0) + 1
    for l in range(k + 2):
        assert stirling(k, l) == counts.get(l, 0)


def test_stirling_edges():
    assert stirling(3, 2) == 3
    assert all(stirling(k, k) == 1 for k in range(8))
    assert all(stirling(k, 0) == 0 for k in range(1, 8))
    assert stirling(2, 5) == 0 and stirling(-1, 0) == 0


def test_stirling_expands_powers_of_euler():
    # (x d)^k = sum_l S(k, l) x^l d^l, checked on x^p
    for k, p in product(range(7), range(13)):
        falling = [1]
        for l in range(1, k + 1):
            falling.append(falling[-1] * (p - l + 1))
        assert p ** k == sum(stirling(k, l) * falling[l] for l in range(k + 1))


def test_inverse_of_units():
    u = (one(5, XI) + HSeries.hbar(XI, 5).scale(3)) * var(vars_=XI, order=5, power=2)
    assert u * u.inverse() == one(5, XI)
    with pytest.raises(VariableError):
        (one() + var()).inverse()


S = series(XY, 5)


@settings(max_examples=60, deadline=None)
@given(S, S, S)
def test_ring_axioms(f, g, k):
    assert (f * g) * k == f * (g * k)
    assert f * (g + k) == f * g + f * k
    assert f * g == g * f
    assert f - f == HSeries.zero(XY, 5)


@settings(max_examples=60, deadline=None)
@given(S, S)
def test_leibniz_and_euler_identity(f, g):
    for v in ("x1", "x2"):
        assert (f * g).derive(v) == f.derive(v) * g + f * g.derive(v)
        assert (f * g).euler(v) == f.euler(v) * g + f * g.euler(v)
        assert f.euler(v) == HSeries.var(XY, 5, v) * f.derive(v)


@settings(max_examples=60, deadline=None)
@given(S, S, st.sampled_from([-2, -1, 1, 2]))
def test_dilate_and_translate_are_automorphisms(f, g, k):
    assert (f * g).dilate("x1", k) == f.dilate("x1", k) * g.dilate("x1", k)
    assert f.dilate("x1", k).dilate("x1", -k) == f
    assert (f * g).translate("x2", k) == f.translate("x2", k) * g.translate("x2", k)
    assert f.translate("x2", k).translate("x2", -k) == f


def test_laurent_poly_basics():
    x = LaurentPoly.var(XI, "x")
    assert (x ** -2) * (x ** 2) == LaurentPoly.constant(XI, 1)
    assert not (x - x)
    assert LaurentPoly(XI, {(1,): 0}).terms == {}
