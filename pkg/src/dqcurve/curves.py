"""Spectral curves of Higgs fields and their quantization in a chart.

A plane curve ``P(base, fiber) = 0`` is quantized by the trivial lift with
base coordinates to the left:

``weyl``         ``x^a xi^b  -> x^a (h D)^b``      on T*C        (x, xi)
``scaling``      ``x1^a x2^b -> x^a S^b``          on C* x C*    (x1, x2)
``translation``  ``x2^a x1^b -> x^a T^b``          on C* x C     (x2 base, x1 fiber)

Applying the matching symbol map and reducing mod h gives the curve back.
"""

from __future__ import annotations

from dataclasses import dataclass

from .operators import OperatorAlgebra, SkewOperator, op_compose
from .sampling import random_rational
from .series import HSeries, LaurentPoly, Var, VariableError
from .symbols import SymbolMap

__all__ = [
    "LAYOUTS",
    "PlaneCurve",
    "HiggsChart",
    "higgs_char_poly",
    "quantize_plane_curve",
    "semiclassical_check",
    "curve_map",
    "random_curve",
]

# layout: (variables, base, fiber, symbol map)
LAYOUTS = {
    "weyl": ((Var("x", False), Var("xi", False)), "x", "xi", "rees_to_moyal"),
    "scaling": ((Var("x1", True), Var("x2", True)), "x1", "x2", "scaling_to_qtorus"),
    "translation": ((Var("x1", True), Var("x2", False)), "x2", "x1", "translation_to_mixed_op"),
}


class CurveError(ValueError):
    """Curve layout does not fit the requested target."""


@dataclass(frozen=True)
class PlaneCurve:
    poly: LaurentPoly
    base: str
    fiber: str

    def __post_init__(self):
        if len(self.poly.vars) != 2:
            raise CurveError("a plane curve needs exactly two variables")
        names = {v.name for v in self.poly.vars}
        if names != {self.base, self.fiber}:
            raise CurveError(f"base/fiber {self.base},{self.fiber} do not name {sorted(names)}")
        if not self.poly:
            raise CurveError("the curve polynomial is identically zero")

    @classmethod
    def in_layout(cls, poly: LaurentPoly, layout: str) -> "PlaneCurve":
        vars_, base, fiber, _ = LAYOUTS[layout]
        if poly.vars != vars_:
            raise CurveError(f"{layout} curves live over {vars_}, got {poly.vars}")
        return cls(poly, base, fiber)

    @property
    def vars(self):
        return self.poly.vars

    @property
    def layout(self) -> str | None:
        for name, (vars_, base, fiber, _) in LAYOUTS.items():
            if self.vars == vars_ and (self.base, self.fiber) == (base, fiber):
                return name
        return None

    def exponents(self, e):
        """Split an exponent vector into (base power, fiber power)."""
        d = {v.name: k for v, k in zip(self.vars, e)}
        return d[self.base], d[self.fiber]

    def squared(self) -> "PlaneCurve":
        return PlaneCurve(self.poly * self.poly, self.base, self.fiber)


@dataclass(frozen=True)
class HiggsChart:
    """A Higgs field in a chart: an ``r x r`` matrix of polynomials in one variable."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        r = len(rows)
        if r == 0 or any(len(row) != r for row in rows):
            raise CurveError("a Higgs chart must be a nonempty square matrix")
        vars_ = rows[0][0].vars
        if len(vars_) != 1 or any(p.vars != vars_ for row in rows for p in row):
            raise CurveError("entries must share a single base variable")

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def var(self) -> Var:
        return self.entries[0][0].vars[0]


def _det(m):
    """Cofactor expansion along the first row (ranks here are small)."""
    if len(m) == 1:
        return m[0][0]
    total = None
    for j, a in enumerate(m[0]):
        if not a:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = a * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0] * 0


def higgs_char_poly(chart: HiggsChart, fiber: str = "xi") -> PlaneCurve:
    """``det(xi I - phi(x))``, monic of degree ``r`` in ``xi``."""
    base = chart.var
    if base.name == fiber:
        raise CurveError(f"fiber name {fiber!r} clashes with the base variable")
    vars_ = (base, Var(fiber, False))
    xi = LaurentPoly.var(vars_, fiber)
    m = []
    for i, row in enumerate(chart.entries):
        m.append([
            (xi if i == j else LaurentPoly.zero(vars_)) - p.with_vars(vars_)
            for j, p in enumerate(row)
        ])
    return PlaneCurve(_det(m), base.name, fiber)


def _target_algebra(target: str, order: int) -> OperatorAlgebra:
    if target == "weyl":
        return OperatorAlgebra.weyl(1, order)
    if target == "scaling":
        return OperatorAlgebra.scaling(order)
    if target == "translation":
        return OperatorAlgebra.translation(order)
    raise CurveError(f"unknown quantization target {target!r}")


def quantize_plane_curve(curve: PlaneCurve, target: str, order: int, square: bool = False) -> SkewOperator:
    """Trivial lift of ``curve`` (optionally of its square) into ``target``."""
    alg = _target_algebra(target, order)
    if curve.layout != target:
        raise CurveError(
            f"curve over {curve.vars} (base {curve.base}, fiber {curve.fiber}) "
            f"does not match the {target} layout {LAYOUTS[target][0]}"
        )
    if square:
        curve = curve.squared()
    fiber_op = alg.hbar() * alg.gen() if target == "weyl" else alg.gen()
    out = alg.zero()
    for e, c in sorted(curve.poly.terms.items()):
        a, b = curve.exponents(e)
        coeff = alg.coeff(HSeries.monomial(alg.vars, order, (a,), c))
        out = out + op_compose(coeff, fiber_op ** b)
    return out


def curve_map(target: str) -> SymbolMap:
    return SymbolMap(LAYOUTS[target][3])


def semiclassical_check(op: SkewOperator, smap: SymbolMap) -> PlaneCurve:
    """The classical curve ``sigma0(map(op))`` in the layout of the map's target."""
    image = smap(op).sigma0()
    layout = next(k for k, v in LAYOUTS.items() if v[3] == smap.kind)
    vars_ = LAYOUTS[layout][0]
    if smap.kind == "rees_to_moyal":
        if smap.n != 1:
            raise VariableError("plane curves need a single base variable")
        image = image.with_vars(vars_, {"u": "xi"})
    return PlaneCurve.in_layout(image, layout)


def random_curve(rng, layout: str, max_terms: int = 6, max_fiber: int = 3, max_base: int = 3):
    """A random nonzero curve in ``layout`` (signed exponents where invertible)."""
    vars_, base, fiber, _ = LAYOUTS[layout]
    inv = {v.name: v.invertible for v in vars_}
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            a = rng.randint(-max_base if inv[base] else 0, max_base)
            b = rng.randint(-max_fiber if inv[fiber] else 0, max_fiber)
            e = tuple(a if v.name == base else b for v in vars_)
            terms[e] = random_rational(rng)
        poly = LaurentPoly(vars_, terms)
        if poly:
            return PlaneCurve(poly, base, fiber)
