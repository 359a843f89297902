"""Named property suites, shared by ``dqcurve verify`` and the test-suite.

Each suite returns a :class:`SuiteResult` whose ``lines`` summarize what
was checked; ``failures`` hold counterexamples in serialized form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .curves import (
    HiggsChart, LAYOUTS, curve_map, higgs_char_poly, quantize_plane_curve,
    random_curve, semiclassical_check,
)
from .operators import (
    OperatorAlgebra, basis_witness, is_rees_element, op_apply, op_normal_form,
)
from .polarization import Polarization, annihilator_kernel, kernel_agreement
from .sampling import SampleSpec, random_operator, random_poly, random_rational
from .series import HSeries, LaurentPoly, Var, exp_hbar
from .serialize import operator_to_text, series_to_doc, series_to_text
from .star import ALGEBRAS, StarAlgebra, poisson_bracket, star_mul, verify_star_axioms
from .symbols import SYMBOL_MAPS, SymbolMap, verify_morphism
from .synthesis import (
    BUILTIN_DATA, qtorus_data,
    synthesis_crosscheck, verify_quantization_conditions,
)

__all__ = ["SuiteResult", "SUITES", "run_suite"]


@dataclass
class SuiteResult:
    name: str
    lines: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, label: str, ok: bool, **witness) -> None:
        self.lines.append(f"{'ok  ' if ok else 'FAIL'} {label}")
        if not ok:
            self.failures.append({"check": label, **witness})

    def to_doc(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "lines": self.lines, "failures": self.failures}


def star_axioms(seed=0) -> SuiteResult:
    res = SuiteResult("star-axioms")
    spec = SampleSpec(seed=seed)
    for alg in ALGEBRAS:
        rep = verify_star_axioms(alg, spec, checks=("unit", "bilinear", "sigma0"))
        res.check(rep.summary(), rep.passed, failures=rep.failures)
    return res


def associativity(seed=0) -> SuiteResult:
    res = SuiteResult("associativity")
    spec = SampleSpec(seed=seed)
    for alg in ALGEBRAS:
        rep = verify_star_axioms(alg, spec, checks=("assoc",))
        res.check(rep.summary(), rep.passed, failures=rep.failures)
    return res


def qtorus_commutation(seed=0, order=10) -> SuiteResult:
    res = SuiteResult("qtorus-commutation")
    alg = StarAlgebra("qtorus")
    x1, x2 = alg.var("x1", order), alg.var("x2", order)
    lhs = star_mul(alg, x2, x1) - exp_hbar(1, order, alg.vars) * star_mul(alg, x1, x2)
    res.check(f"x2*x1 - exp(h) x1*x2 = 0 at N={order}", not lhs, got=series_to_doc(lhs))
    return res


def _classical_bracket(alg: StarAlgebra, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """The bracket of the symplectic form, written out independently."""
    if alg.kind == "moyal":
        out = LaurentPoly.zero(alg.vars)
        for x, u in zip(alg.base_names, alg.fiber_names):
            out = out + f.derive(u) * g.derive(x) - f.derive(x) * g.derive(u)
        return out
    d = f.derive("x2") * g.derive("x1") - f.derive("x1") * g.derive("x2")
    weight = LaurentPoly.var(alg.vars, "x1")
    if alg.kind == "qtorus":
        weight = weight * LaurentPoly.var(alg.vars, "x2")
    if alg.kind == "mixed_op":
        weight = -weight
    return weight * d


def poisson(seed=0, samples=50) -> SuiteResult:
    res = SuiteResult("poisson")
    named = [
        (StarAlgebra("moyal", 1), "u", "x", lambda v: LaurentPoly.constant(v, 1), "{u,x} = 1"),
        (StarAlgebra("qtorus"), "x2", "x1",
         lambda v: LaurentPoly.var(v, "x1") * LaurentPoly.var(v, "x2"), "{x2,x1} = x1 x2 (qtorus)"),
        (StarAlgebra("mixed"), "x2", "x1", lambda v: LaurentPoly.var(v, "x1"), "{x2,x1} = x1 (mixed)"),
    ]
    for alg, a, b, want, label in named:
        got = poisson_bracket(alg, LaurentPoly.var(alg.vars, a), LaurentPoly.var(alg.vars, b))
        res.check(label, got == want(alg.vars), got=str(got))
    rng = random.Random(f"{seed}:poisson")
    for alg in ALGEBRAS:
        bad = []
        for _ in range(samples):
            f, g, k = (random_poly(rng, alg.vars, 4, (-3, 3)) for _ in range(3))
            fg = poisson_bracket(alg, f, g)
            if fg != -poisson_bracket(alg, g, f):
                bad.append(("antisymmetry", f, g, k))
            if poisson_bracket(alg, f, g * k) != fg * k + g * poisson_bracket(alg, f, k):
                bad.append(("leibniz", f, g, k))
            if fg != _classical_bracket(alg, f, g):
                bad.append(("symplectic form", f, g, k))
        res.check(f"{alg.tag}: antisymmetry, Leibniz, symplectic form on {samples} pairs", not bad,
                  witnesses=[[w[0], str(w[1]), str(w[2]), str(w[3])] for w in bad[:3]])
    return res


def synthesis(seed=0, degree=3, order=6) -> SuiteResult:
    res = SuiteResult("synthesis")
    for name, (make, closed) in BUILTIN_DATA.items():
        data = make(degree, order)
        cond = verify_quantization_conditions(data)
        if name == "corrupted":
            res.check("corrupted data rejected by the quantization conditions", not cond.passed)
            continue
        res.check(cond.summary(), cond.passed, failures=cond.failures)
        rep = synthesis_crosscheck(data, StarAlgebra.parse(closed), degree, order)
        res.check(rep.summary(), rep.passed, failures=rep.failures[:3])
    wrong = synthesis_crosscheck(qtorus_data(degree, order), StarAlgebra("mixed"), max_witnesses=50)
    pairs = [f["pair"] for f in wrong.failures]
    res.check("C* x C* data against the mixed product is refuted with witness (x2, x1)",
              ["x2", "x1"] in pairs)
    return res


def _random_word(rng, alg: OperatorAlgebra, max_len=6, power=3):
    """Alternating generator powers and h-free coefficient letters ``c x^a``."""
    gen = alg.alphabet[0]
    lo = -power if alg.vars[0].invertible else 0
    word = []
    for _ in range(rng.randint(1, max_len)):
        if rng.random() < 0.5:
            word.append((gen, rng.randint(-power, power)))
        else:
            a = rng.randint(lo, power)
            word.append(alg.coeff(HSeries.monomial(alg.vars, alg.order, (a,), random_rational(rng))))
    return word


def _word_apply(alg, word, f):
    for letter in reversed(word):
        f = op_apply(op_normal_form([letter], alg), f)
    return f


def normal_forms(seed=0, words=200, p_max=12, order=8) -> SuiteResult:
    res = SuiteResult("normal-form")
    for alg in (OperatorAlgebra.scaling(order), OperatorAlgebra.translation(order)):
        rng = random.Random(f"{seed}:words:{alg.tag}")
        unsound, clashes, separated = [], [], 0
        forms = []
        for _ in range(words):
            word = _random_word(rng, alg)
            nf = op_normal_form(word, alg)
            if op_normal_form(nf) != nf:
                unsound.append(("idempotence", operator_to_text(nf)))
            for p in range(p_max + 1):
                xp = HSeries.monomial(alg.vars, order, (p,))
                if op_apply(nf, xp) != _word_apply(alg, word, xp):
                    unsound.append(("soundness", operator_to_text(nf), p))
                    break
            forms.append(nf)
        for P, Q in zip(forms, forms[1:]):
            if P == Q:
                continue
            if basis_witness(P, Q, p_max) is None:
                clashes.append([operator_to_text(P), operator_to_text(Q)])
            else:
                separated += 1
        res.check(f"{alg.tag}: {words} words normal-form soundly on x^p, p <= {p_max}",
                  not unsound, witnesses=unsound[:3])
        res.check(f"{alg.tag}: {separated} distinct normal-form pairs separated on x^p, p <= {p_max}",
                  not clashes, witnesses=clashes[:3])
    return res


def morphisms(seed=0) -> SuiteResult:
    res = SuiteResult("morphism")
    for kind in SYMBOL_MAPS:
        rep = verify_morphism(SymbolMap(kind), SampleSpec(seed=seed))
        res.check(rep.summary(), rep.passed, failures=rep.failures)
    return res


def quantization(seed=0, curves=50, order=6, degree=6) -> SuiteResult:
    res = SuiteResult("quantize")
    rng = random.Random(f"{seed}:curves")
    for target in LAYOUTS:
        bad = []
        for _ in range(curves):
            curve = random_curve(rng, target)
            op = quantize_plane_curve(curve, target, order)
            if semiclassical_check(op, curve_map(target)) != curve:
                bad.append(str(curve.poly))
            if target == "weyl" and not is_rees_element(op):
                bad.append(f"not Rees: {curve.poly}")
        res.check(f"{target}: sigma0(symbol(quantize(P))) = P on {curves} curves", not bad, witnesses=bad[:3])

    x = (Var("x", False),)
    zero, one, xx = LaurentPoly.zero(x), LaurentPoly.constant(x, 1), LaurentPoly.var(x, "x")
    airy = higgs_char_poly(HiggsChart([[zero, one], [xx, zero]]))
    want = LaurentPoly.var(airy.vars, "xi") ** 2 - LaurentPoly.var(airy.vars, "x")
    res.check("charpoly [[0,1],[x,0]] = xi^2 - x", airy.poly == want, got=str(airy.poly))
    op = quantize_plane_curve(airy, "weyl", order)
    W = OperatorAlgebra.weyl(1, order)
    res.check("quantize(xi^2 - x) = (h D)^2 - x", op == (W.hbar() * W.gen()) ** 2 - W.var("x"),
              got=operator_to_text(op))
    weyl = Polarization("weyl")
    res.check(f"(h D)^2 - x has no polynomial solutions (D={degree}, N={order})",
              annihilator_kernel(op, weyl, degree, order) == [])

    def kernel_is(P, pol, expected, label):
        got = annihilator_kernel(P, pol, degree, order)
        want_ = [HSeries.monomial(pol.vars, order, (e,)) for e in expected]
        res.check(label, got == want_, got=[series_to_text(g) for g in got])

    S = OperatorAlgebra.scaling(order)
    kernel_is(S.gen() - S.coeff(exp_hbar(1, order, S.vars)), Polarization("qtorus_pol"), [1],
              "kernel of S - exp(h) is {x}")
    T = OperatorAlgebra.translation(order)
    kernel_is(T.gen() - T.one(), Polarization("gw"), [0], "kernel of T - 1 is {1}")
    u = HSeries.var(weyl.ambient.vars, order, "u")
    kernel_is(u, weyl, [0], "kernel of u is {1}")
    return res


def kernel_agreements(seed=0, samples=20, degree=6, order=6) -> SuiteResult:
    res = SuiteResult("kernel-agreement")
    rng = random.Random(f"{seed}:kernels")
    S = OperatorAlgebra.scaling(order)
    pol, smap = Polarization("qtorus_pol"), SymbolMap("scaling_to_qtorus")
    bad, nonempty = [], 0
    for i in range(samples):
        P = random_operator(rng, S, max_terms=3, power_range=(-2, 2), coeff_terms=3,
                            exp_range=(-2, 2), max_hpow=2)
        if i % 2:
            # c(x) (S^j - exp(j k h)) kills x^k, so half the samples have a kernel
            j, k = rng.choice([-2, -1, 1, 2]), rng.randint(-2, 2)
            c = S.coeff(HSeries.monomial(S.vars, order, (rng.randint(-2, 2),), random_rational(rng)))
            P = c * (S.gen(0, j) - S.coeff(exp_hbar(j * k, order, S.vars)))
        if not kernel_agreement(P, pol, smap, degree, order):
            bad.append(operator_to_text(P))
        nonempty += bool(annihilator_kernel(P, pol, degree, order))
    res.check(f"{samples} random scaling operators: direct and embedded kernels agree "
              f"({nonempty} nonempty)", not bad, witnesses=bad[:3])
    eig = []
    for k in range(-2, 3):
        P = S.gen() - S.coeff(exp_hbar(k, order, S.vars))
        eig.append(kernel_agreement(P, pol, smap, degree, order))
    res.check("eigen-operators S - exp(k h), |k| <= 2: kernels agree", all(eig))
    T = OperatorAlgebra.translation(order)
    res.check("T - 1 under the gw polarization: kernels agree",
              kernel_agreement(T.gen() - T.one(), Polarization("gw"),
                               SymbolMap("translation_to_mixed_op"), degree, order))
    return res


SUITES = {
    "star-axioms": star_axioms,
    "associativity": associativity,
    "qtorus-commutation": qtorus_commutation,
    "poisson": poisson,
    "synthesis": synthesis,
    "normal-form": normal_forms,
    "morphism": morphisms,
    "quantize": quantization,
    "kernel-agreement": kernel_agreements,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    return SUITES[name](seed=seed)
