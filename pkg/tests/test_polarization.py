import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqcurve.operators import OperatorAlgebra, OperatorError
from dqcurve.polarization import (
    POLARIZATIONS, Polarization, annihilator_kernel, kernel_agreement, polar_apply, to_base_operator,
)
from dqcurve.series import HSeries, VariableError, exp_hbar
from dqcurve.star import star_mul
from dqcurve.symbols import SymbolMap
from strategies import series

N = 4


def amb(pol, name, power=1, order=N):
    return HSeries.var(pol.ambient.vars, order, name, power)


def base(pol, p, order=N):
    return HSeries.monomial(pol.vars, order, (p,))


def test_table_rules():
    w = Polarization("weyl")
    assert polar_apply(w, amb(w, "u"), base(w, 3)) == base(w, 2).scale(3) * HSeries.hbar(w.vars, N)
    q = Polarization("qtorus_pol")
    assert polar_apply(q, amb(q, "x2"), base(q, 2)) == base(q, 2) * exp_hbar(2, N, q.vars)
    hz = Polarization("hurwitz")
    assert polar_apply(hz, amb(hz, "x2"), base(hz, 3)) == (base(hz, 3) * HSeries.hbar(hz.vars, N)).scale(3)
    g = Polarization("gw")
    x, h = base(g, 1), HSeries.hbar(g.vars, N)
    assert polar_apply(g, amb(g, "x1"), base(g, 2)) == (x + h) ** 2
    assert polar_apply(g, amb(g, "x2"), base(g, 2)) == base(g, 3)


def test_gw_reads_x2_before_x1():
    g = Polarization("gw")
    a = amb(g, "x1") * amb(g, "x2")
    x, h = base(g, 1), HSeries.hbar(g.vars, N)
    # x1 x2 acts as x o T, i.e. x2 applied after x1
    assert polar_apply(g, a, base(g, 1)) == x * (x + h)


@pytest.mark.parametrize("kind", POLARIZATIONS)
def test_lagrangian_fixes_the_fiber(kind):
    pol = Polarization(kind)
    coord, value = pol.lagrangian
    one = base(pol, 0)
    assert polar_apply(pol, amb(pol, coord), one) == one.scale(value)
    assert polar_apply(pol, amb(pol, pol.base_coordinate), one) == base(pol, 1)


def test_negative_fiber_powers():
    w = Polarization("weyl")
    with pytest.raises(VariableError):
        amb(w, "u", -1)
    q = Polarization("qtorus_pol")
    a = amb(q, "x2", -1)
    assert polar_apply(q, a, polar_apply(q, amb(q, "x2"), base(q, 3))) == base(q, 3)


def test_operator_sources():
    q = Polarization("qtorus_pol")
    S = OperatorAlgebra.scaling(N)
    assert polar_apply(q, S.gen(), base(q, 1)) == polar_apply(q, amb(q, "x2"), base(q, 1))
    with pytest.raises(OperatorError):
        polar_apply(q, OperatorAlgebra.translation(N).gen(), base(q, 1))


def test_to_base_operator_matches_table():
    for kind in POLARIZATIONS:
        pol = Polarization(kind)
        table = pol.table(N)
        assert to_base_operator(pol, amb(pol, pol.fiber_coordinate)) == table[pol.fiber_coordinate]


def _ambient_series(pol):
    return series(pol.ambient.vars, N, max_terms=3, lo=-2, hi=2, max_hpow=2)


@pytest.mark.parametrize("kind", POLARIZATIONS)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_module_action_law(kind, data):
    pol = Polarization(kind)
    a = data.draw(_ambient_series(pol))
    b = data.draw(_ambient_series(pol))
    f = data.draw(series(pol.vars, N, max_terms=3, lo=-2, hi=3))
    assert polar_apply(pol, star_mul(pol.ambient, a, b), f) == polar_apply(pol, a, polar_apply(pol, b, f))


@pytest.mark.parametrize("kind", POLARIZATIONS)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_table_route_agrees_with_direct_action(kind, data):
    pol = Polarization(kind)
    a = data.draw(_ambient_series(pol))
    f = data.draw(series(pol.vars, N, max_terms=3, lo=-2, hi=3))
    P = to_base_operator(pol, a)
    assert polar_apply(pol, P, f) == polar_apply(pol, a, f)


@pytest.mark.parametrize("kind", POLARIZATIONS)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_action_on_one_restricts_to_lagrangian(kind, data):
    pol = Polarization(kind)
    a = data.draw(_ambient_series(pol))
    coord, value = pol.lagrangian
    expected = HSeries.zero(pol.vars, N)
    for (k, e), c in a.terms.items():
        exps = dict(zip((v.name for v in pol.ambient.vars), e))
        if value == 0 and exps[coord]:
            continue
        expected = expected + HSeries.monomial(pol.vars, N, (exps[pol.base_coordinate],), c, hpow=k)
    assert polar_apply(pol, a, base(pol, 0)) == expected


def test_kernel_examples():
    q = Polarization("qtorus_pol")
    S = OperatorAlgebra.scaling(N)
    assert annihilator_kernel(S.gen() - S.coeff(exp_hbar(1, N, S.vars)), q, 4, N) == [base(q, 1)]
    g = Polarization("gw")
    T = OperatorAlgebra.translation(N)
    assert annihilator_kernel(T.gen() - T.one(), g, 4, N) == [base(g, 0)]
    w = Polarization("weyl")
    assert annihilator_kernel(amb(w, "u"), w, 4, N) == [base(w, 0)]
    W = OperatorAlgebra.weyl(1, N)
    assert annihilator_kernel((W.hbar() * W.gen()) ** 2 - W.var("x"), w, 6, N) == []


def test_kernel_of_euler_operator_has_a_correction():
    # (h x D - h) kills x exactly, and nothing else of degree <= 3
    hz = Polarization("hurwitz")
    a = amb(hz, "x2") - HSeries.hbar(hz.ambient.vars, N)
    assert annihilator_kernel(a, hz, 3, N) == [base(hz, 1)]


def test_truncation_artifacts_are_dropped():
    # h^N kills every h f mod h^(N+1), but no solution has a nonzero leading part
    w = Polarization("weyl")
    assert annihilator_kernel(HSeries.hbar(w.ambient.vars, N, N), w, 2, N) == []


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([-2, -1, 1, 2]), st.integers(-2, 2), st.integers(-2, 2))
def test_kernel_stable_under_higher_truncation(j, k, c):
    q = Polarization("qtorus_pol")

    def op(order):
        S = OperatorAlgebra.scaling(order)
        coeff = S.coeff(HSeries.monomial(S.vars, order, (c,), 3))
        return coeff * (S.gen(0, j) - S.coeff(exp_hbar(j * k, order, S.vars)))

    low = annihilator_kernel(op(N), q, 3, N)
    high = annihilator_kernel(op(N + 2), q, 3, N + 2)
    assert [b.truncate(N) for b in high] == low
    assert low == [base(q, k)]


def test_kernel_agreement_pairs():
    S = OperatorAlgebra.scaling(N)
    P = S.gen(0, 2) - S.coeff(exp_hbar(-2, N, S.vars))
    assert kernel_agreement(P, Polarization("qtorus_pol"), SymbolMap("scaling_to_qtorus"), 3, N)
    with pytest.raises(ValueError):
        kernel_agreement(P, Polarization("gw"), SymbolMap("scaling_to_qtorus"), 3, N)
