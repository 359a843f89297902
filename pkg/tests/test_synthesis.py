import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqcurve.operators import OperatorAlgebra
from dqcurve.series import HSeries, LaurentPoly, Var, VariableError
from dqcurve.star import StarAlgebra, star_mul
from dqcurve.synthesis import (
    BUILTIN_DATA, QuantizationData, SynthesisError, centralizer_check, corrupted_data, mixed_b_data,
    mixed_data, monomial_box, psi_forward, psi_inverse, qtorus_data, synthesis_crosscheck,
    synthesize_star, verify_quantization_conditions,
)

ORDER = 4


def mono(data, e):
    return LaurentPoly.monomial(data.vars, e)


def test_monomial_box_respects_invertibility():
    box = monomial_box((Var("x1", True), Var("x2", False)), 1)
    assert len(box) == 6
    assert all(b >= 0 for _, b in box)
    assert (-1, 0) in box


@pytest.mark.parametrize("make", [qtorus_data, mixed_data, mixed_b_data], ids=lambda m: m.__name__)
def test_builtin_data_satisfy_conditions(make):
    rep = verify_quantization_conditions(make(2, ORDER))
    assert rep.passed, rep.failures
    assert rep.checked > 0


def test_corrupted_data_fail_commutation_only():
    rep = verify_quantization_conditions(corrupted_data(2, ORDER))
    assert {f["check"] for f in rep.failures} == {"commute"}
    assert any(f["pair"] == "[A2,B1]" for f in rep.failures)


def test_centralizer():
    data = qtorus_data(2, ORDER)
    for a in data.A:
        assert centralizer_check(data, a) == []
    assert centralizer_check(data, data.algebra.gen(1)) == [1]


@pytest.mark.parametrize("name", sorted(BUILTIN_DATA))
def test_crosscheck_against_closed_form(name):
    make, closed = BUILTIN_DATA[name]
    # the product only depends on the A family, so corrupting B is caught by
    # the commutation condition rather than here
    rep = synthesis_crosscheck(make(2, ORDER), StarAlgebra.parse(closed))
    assert rep.passed, rep.summary()


def test_crosscheck_reports_mismatches():
    rep = synthesis_crosscheck(qtorus_data(1, 3), StarAlgebra("qtorus"), max_witnesses=2)
    assert rep.passed
    rep = synthesis_crosscheck(mixed_data(1, 3), StarAlgebra("mixed_op"), max_witnesses=2)
    assert len(rep.failures) == 2
    assert set(rep.failures[0]) == {"pair", "expected", "got"}


def test_qtorus_synthesis_orientation():
    data = qtorus_data(1, 3)
    x1, x2 = mono(data, (1, 0)), mono(data, (0, 1))
    assert synthesize_star(data, x1, x2) == HSeries.from_poly(x1 * x2, 3)
    expected = star_mul(StarAlgebra("qtorus"), HSeries.from_poly(x2, 3), HSeries.from_poly(x1, 3))
    assert synthesize_star(data, x2, x1) == expected


def test_psi_inverse_rejects_out_of_box():
    data = qtorus_data(1, 3)
    with pytest.raises(SynthesisError):
        psi_inverse(data, mono(data, (2, 0)))


def test_psi_inverse_rejects_foreign_variables():
    data = qtorus_data(1, 3)
    with pytest.raises(VariableError):
        psi_inverse(data, LaurentPoly.monomial((Var("y", False),), (1,)))


def test_swapped_exchanges_families():
    data = mixed_data(2, ORDER)
    sw = data.swapped()
    assert sw.A == data.B and sw.B == data.A


def test_file_data_from_operators():
    alg = OperatorAlgebra.mixed((Var("x1", True), Var("x2", True)), ("S", "S"), ORDER)
    ref = qtorus_data(2, ORDER)
    data = QuantizationData("copy", ref.A, ref.B, 2)
    assert data.algebra == alg
    assert synthesis_crosscheck(data, StarAlgebra("qtorus")).passed


def _poly(data, seed, bound):
    rng = random.Random(seed)
    box = monomial_box(data.vars, bound)
    terms = {rng.choice(box): rng.randint(-5, 5) for _ in range(3)}
    return LaurentPoly(data.vars, terms)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([qtorus_data, mixed_data, mixed_b_data]), st.integers(0, 10 ** 6))
def test_psi_round_trip(make, seed):
    data = make(2, ORDER)
    f = HSeries.from_poly(_poly(data, seed, 2), ORDER)
    P = psi_inverse(data, f)
    assert psi_forward(data, P) == f
    assert psi_inverse(data, psi_forward(data, P)) == P
    assert centralizer_check(data, P) == []


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_synthesized_product_is_bilinear_and_classical(s1, s2):
    data = qtorus_data(2, ORDER)
    f, g = _poly(data, s1, 1), _poly(data, s2, 1)
    prod = synthesize_star(data, f, g)
    assert prod.coeff(0) == f * g
    assert synthesize_star(data, f + f, g) == prod.scale(2)
