"""Symbol maps from operator algebras into the closed-form star algebras.

* ``rees_to_moyal``: ``x -> x``, ``D -> u / h``, defined on Rees elements
  (the coefficient of ``D^k`` must be divisible by ``h^|k|``).
* ``scaling_to_qtorus``: ``f(x) -> f(x1)``, ``S^k -> x2^k``.
* ``translation_to_mixed_op``: ``f(x) -> f(x2)``, ``T^k -> x1^k``, landing in
  the opposite of the mixed product.

All three act term by term on normal forms and are algebra morphisms:
``map(P o Q) = map(P) * map(Q)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .operators import OperatorAlgebra, OperatorError, SkewOperator, op_compose
from .sampling import SampleSpec, random_operator
from .series import HSeries
from .serialize import operator_to_text, series_to_doc
from .star import StarAlgebra, StarReport, star_mul

__all__ = [
    "SymbolMap",
    "SYMBOL_MAPS",
    "rees_symbol",
    "phi_scaling",
    "psi_translation",
    "verify_morphism",
]


def _check_source(P: SkewOperator, tags) -> None:
    if P.algebra.tag not in tags:
        raise OperatorError(f"expected an operator in {'/'.join(tags)}, got {P.algebra.tag}")


def _divide_hbar(c: HSeries, k: int, order: int) -> HSeries:
    return HSeries(c.vars, order, {(j - k, e): v for (j, e), v in c.terms.items() if j - k <= order})


def rees_symbol(P: SkewOperator) -> HSeries:
    """Total symbol ``sum f_k h^-|k| u^k`` of a Rees element.

    The coefficient of ``D^k`` is only known modulo ``h^(N+1)``, so after
    dividing by ``h^|k|`` the image is exact through order ``N - max|k|``;
    that is the truncation order of the result.
    """
    _check_source(P, ("weyl", "rees"))
    alg = P.algebra
    n = len(alg.vars)
    target = StarAlgebra("moyal", n)
    tvars = target.vars
    top = max((sum(p) for p in P.terms), default=0)
    order = alg.order - top
    if order < 0:
        raise OperatorError(f"derivative order {top} exceeds truncation {alg.order}")
    out = HSeries.zero(tvars, order)
    for powers, c in P.terms.items():
        k = sum(powers)
        v = c.valuation()
        if v < k:
            raise OperatorError(
                f"not a Rees element: coefficient of D^{powers} has h-valuation {v} < {k}"
            )
        lifted = _divide_hbar(c.with_vars(tvars), k, order)
        out = out + lifted * HSeries.monomial(tvars, order, (0,) * n + tuple(powers))
    return out


def phi_scaling(P: SkewOperator) -> HSeries:
    """``f(x) S^k -> f(x1) x2^k`` into the quantum torus."""
    _check_source(P, ("scaling", "scaling+"))
    tvars = StarAlgebra("qtorus").vars
    n = P.algebra.order
    out = HSeries.zero(tvars, n)
    for (k,), c in P.terms.items():
        out = out + c.with_vars(tvars, {"x": "x1"}) * HSeries.monomial(tvars, n, (0, k))
    return out


def psi_translation(P: SkewOperator) -> HSeries:
    """``f(x) T^k -> f(x2) x1^k`` into the opposite mixed product."""
    _check_source(P, ("translation", "translation+"))
    tvars = StarAlgebra("mixed_op").vars
    n = P.algebra.order
    out = HSeries.zero(tvars, n)
    for (k,), c in P.terms.items():
        out = out + c.with_vars(tvars, {"x": "x2"}) * HSeries.monomial(tvars, n, (k, 0))
    return out


@dataclass(frozen=True)
class SymbolMap:
    kind: str
    n: int = 1

    def __post_init__(self):
        if self.kind not in SYMBOL_MAPS:
            raise ValueError(f"unknown symbol map {self.kind!r}; expected one of {SYMBOL_MAPS}")

    @property
    def target(self) -> StarAlgebra:
        return {
            "rees_to_moyal": StarAlgebra("moyal", self.n),
            "scaling_to_qtorus": StarAlgebra("qtorus"),
            "translation_to_mixed_op": StarAlgebra("mixed_op"),
        }[self.kind]

    def source(self, order: int) -> OperatorAlgebra:
        if self.kind == "rees_to_moyal":
            return OperatorAlgebra.rees(self.n, order)
        if self.kind == "scaling_to_qtorus":
            return OperatorAlgebra.scaling(order)
        return OperatorAlgebra.translation(order)

    @property
    def fiber(self) -> tuple:
        """Target coordinates carrying the generators (the fiber directions)."""
        if self.kind == "translation_to_mixed_op":
            return ("x1",)
        return self.target.fiber_names

    def __call__(self, P: SkewOperator) -> HSeries:
        if self.kind == "rees_to_moyal":
            return rees_symbol(P)
        if self.kind == "scaling_to_qtorus":
            return phi_scaling(P)
        return psi_translation(P)


SYMBOL_MAPS = ("rees_to_moyal", "scaling_to_qtorus", "translation_to_mixed_op")


def verify_morphism(
    smap: SymbolMap,
    spec: SampleSpec = SampleSpec(),
    checks=("unit", "additive", "multiplicative"),
    max_witnesses: int = 5,
) -> StarReport:
    """Check that ``smap`` is a unital, additive, multiplicative map on samples.

    Rees symbols lose ``max|k|`` orders of precision, so Rees samples are
    drawn at truncation ``N + 2 * max|k|`` and all images are compared at
    ``N``.
    """
    n = spec.order
    max_power = 2 if smap.kind == "rees_to_moyal" else 3
    work = n + 2 * max_power * smap.n if smap.kind == "rees_to_moyal" else n
    alg = smap.source(work)
    target = smap.target
    rng = spec.rng(f"morphism:{smap.kind}")
    report = StarReport(smap.kind)
    image = lambda P: smap(P).truncate(n)  # noqa: E731
    draw = lambda: random_operator(  # noqa: E731
        rng, alg, power_range=(-max_power, max_power),
        rees=smap.kind == "rees_to_moyal",
    )

    def record(name, lhs, rhs, **inputs):
        ok = lhs == rhs
        if not ok and len(report.failures) >= max_witnesses:
            report._count(name)
            return
        report.record(
            name, ok,
            inputs={k: operator_to_text(v) for k, v in inputs.items()},
            lhs=None if ok else series_to_doc(lhs),
            rhs=None if ok else series_to_doc(rhs),
        )

    if "unit" in checks:
        record("unit", image(alg.one()), HSeries.constant(target.vars, n, 1))
    for _ in range(spec.samples):
        P, Q = draw(), draw()
        mp, mq = image(P), image(Q)
        if "additive" in checks:
            record("additive", image(P + Q), mp + mq, P=P, Q=Q)
        if "multiplicative" in checks:
            record("multiplicative", image(op_compose(P, Q)), star_mul(target, mp, mq), P=P, Q=Q)
    return report
