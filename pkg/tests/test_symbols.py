import pytest

from dqcurve.operators import OperatorAlgebra, OperatorError
from dqcurve.sampling import SampleSpec
from dqcurve.series import HSeries, exp_hbar
from dqcurve.star import StarAlgebra
from dqcurve.symbols import (
    SYMBOL_MAPS, SymbolMap, phi_scaling, psi_translation, rees_symbol, verify_morphism,
)

N = 5


def test_rees_symbol_of_generators():
    R = OperatorAlgebra.weyl(1, N)
    vars_ = StarAlgebra("moyal", 1).vars
    hD = R.hbar() * R.gen()
    assert rees_symbol(hD) == HSeries.var(vars_, N - 1, "u")
    assert rees_symbol(R.var("x")) == HSeries.var(vars_, N, "x")


def test_rees_symbol_loses_precision():
    R = OperatorAlgebra.weyl(1, N)
    P = R.hbar() ** 2 * R.gen() ** 2
    assert rees_symbol(P).order == N - 2
    with pytest.raises(OperatorError):
        rees_symbol(R.gen())


def test_rees_symbol_of_commutator():
    R = OperatorAlgebra.weyl(1, N)
    hD, x = R.hbar() * R.gen(), R.var("x")
    assert rees_symbol(hD * x - x * hD) == HSeries.hbar(StarAlgebra("moyal", 1).vars, N)


def test_phi_scaling_examples():
    S = OperatorAlgebra.scaling(N)
    tv = StarAlgebra("qtorus").vars
    assert phi_scaling(S.gen()) == HSeries.var(tv, N, "x2")
    assert phi_scaling(S.var("x") * S.gen(0, -2)) == HSeries.monomial(tv, N, (1, -2))
    # S x = e^h x S maps onto x2 * x1 = e^h x1 * x2
    assert phi_scaling(S.gen() * S.var("x")) == exp_hbar(1, N, tv) * HSeries.monomial(tv, N, (1, 1))


def test_psi_translation_examples():
    T = OperatorAlgebra.translation(N)
    tv = StarAlgebra("mixed_op").vars
    assert psi_translation(T.gen()) == HSeries.var(tv, N, "x1")
    assert psi_translation(T.var("x")) == HSeries.var(tv, N, "x2")
    h = HSeries.hbar(tv, N)
    assert psi_translation(T.gen() * T.var("x")) == (HSeries.var(tv, N, "x2") + h) * HSeries.var(tv, N, "x1")


def test_wrong_source_is_rejected():
    with pytest.raises(OperatorError):
        phi_scaling(OperatorAlgebra.translation(N).gen())
    with pytest.raises(OperatorError):
        psi_translation(OperatorAlgebra.scaling(N).gen())
    with pytest.raises(ValueError):
        SymbolMap("nope")


def test_symbol_map_metadata():
    assert SymbolMap("scaling_to_qtorus").fiber == ("x2",)
    assert SymbolMap("translation_to_mixed_op").fiber == ("x1",)
    assert SymbolMap("rees_to_moyal", 2).target == StarAlgebra("moyal", 2)


@pytest.mark.parametrize("kind", SYMBOL_MAPS)
def test_maps_are_morphisms(kind):
    rep = verify_morphism(SymbolMap(kind), SampleSpec(samples=15, order=4, max_terms=4))
    assert rep.passed, rep.failures


def test_morphism_check_catches_wrong_target():
    class Flipped(SymbolMap):
        @property
        def target(self):
            return StarAlgebra("mixed")

    rep = verify_morphism(Flipped("translation_to_mixed_op"), SampleSpec(samples=15, order=3))
    assert not rep.passed
    assert {f["check"] for f in rep.failures} == {"multiplicative"}
