"""Star products synthesized from commuting operator data.

Given operators ``A_1..A_n`` and ``B_1..B_n`` on functions of ``x_1..x_n``
with ``A_i(1) = B_i(1) = x_i``, ``A_i = x_i + O(h)`` and ``[A_i, B_j] = 0``,
the map ``psi: a -> a(1)`` from the algebra generated by the ``A``'s is an
isomorphism onto the functions, and ``psi(a) * psi(b) := psi(a o b)`` is a
star product.

``psi`` is inverted on degree-bounded polynomials by triangular
elimination over the ordered monomials ``A^b = A_1^b1 o ... o A_n^bn``
(signed powers on invertible coordinates): each ``A^b(1)`` is ``x^b`` plus
h-higher terms, so the leading monomials can be peeled off one h-order at a
time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

from .operators import OperatorAlgebra, SkewOperator, basis_witness, op_apply, op_compose
from .series import HSeries, LaurentPoly, Var, VariableError
from .serialize import series_to_doc, series_to_text
from .star import StarAlgebra, star_mul

__all__ = [
    "SynthesisError",
    "QuantizationData",
    "monomial_box",
    "qtorus_data",
    "mixed_data",
    "mixed_b_data",
    "corrupted_data",
    "BUILTIN_DATA",
    "verify_quantization_conditions",
    "psi_forward",
    "psi_inverse",
    "synthesize_star",
    "synthesis_crosscheck",
    "centralizer_check",
]


class SynthesisError(ValueError):
    """Input outside the degree box or outside the span of the A-monomials."""


def monomial_box(vars_, bound: int):
    """Exponents with ``|e_i| <= bound``, non-negative on polynomial variables."""
    ranges = [range(-bound if v.invertible else 0, bound + 1) for v in vars_]
    return list(cartesian(*ranges))


@dataclass(frozen=True)
class QuantizationData:
    name: str
    A: tuple
    B: tuple
    degree: int = 3

    def __post_init__(self):
        ops = self.A + self.B
        if not ops or len(self.A) != len(self.B):
            raise SynthesisError("need the same number of A and B operators")
        alg = ops[0].algebra
        if any(op.algebra != alg for op in ops):
            raise SynthesisError("all operators must share one algebra")
        if len(self.A) != len(alg.vars):
            raise SynthesisError("one A and one B per variable")
        object.__setattr__(self, "_cache", {})

    @property
    def algebra(self) -> OperatorAlgebra:
        return self.A[0].algebra

    @property
    def vars(self):
        return self.algebra.vars

    @property
    def order(self) -> int:
        return self.algebra.order

    def swapped(self, name=None) -> "QuantizationData":
        """The same data with the roles of A and B exchanged."""
        return QuantizationData(name or f"{self.name}_b", self.B, self.A, self.degree)

    def with_bounds(self, degree=None, order=None) -> "QuantizationData":
        order = self.order if order is None else order
        alg = self.algebra.with_order(order)
        conv = lambda op: op.retag(alg)  # noqa: E731
        return QuantizationData(
            self.name, tuple(map(conv, self.A)), tuple(map(conv, self.B)),
            self.degree if degree is None else degree,
        )

    def a_monomial(self, beta) -> tuple[SkewOperator, HSeries]:
        """``(A^beta, A^beta(1))``, cached."""
        beta = tuple(beta)
        cache = self._cache
        if beta not in cache:
            op = self.algebra.one()
            for a, b in zip(self.A, beta):
                if b:
                    op = op_compose(op, a ** b)
            cache[beta] = (op, psi_forward(self, op))
        return cache[beta]


# -- built-in data -----------------------------------------------------------

def qtorus_data(degree=3, order=6) -> QuantizationData:
    """A1 = x1, A2 = x2 S1, B1 = x1 S2, B2 = x2 on C* x C*."""
    alg = OperatorAlgebra.mixed((Var("x1", True), Var("x2", True)), ("S", "S"), order)
    x1, x2 = alg.var("x1"), alg.var("x2")
    A = (x1, x2 * alg.gen(0))
    B = (x1 * alg.gen(1), x2)
    return QuantizationData("qtorus", A, B, degree)


def mixed_data(degree=3, order=6) -> QuantizationData:
    """A1 = x1, A2 = h x1 D1 + x2, B1 = x1 T2, B2 = x2 on C* x C."""
    alg = OperatorAlgebra.mixed((Var("x1", True), Var("x2", False)), ("D", "T"), order)
    x1, x2 = alg.var("x1"), alg.var("x2")
    A = (x1, alg.hbar() * x1 * alg.gen(0) + x2)
    B = (x1 * alg.gen(1), x2)
    return QuantizationData("mixed", A, B, degree)


def mixed_b_data(degree=3, order=6) -> QuantizationData:
    return mixed_data(degree, order).swapped("mixed_b")


def corrupted_data(degree=3, order=6) -> QuantizationData:
    """The C* x C* data with B1 replaced by x1 S2^2; [A2, B1] no longer vanishes."""
    good = qtorus_data(degree, order)
    alg = good.algebra
    B = (alg.var("x1") * alg.gen(1, 2), good.B[1])
    return QuantizationData("corrupted", good.A, B, degree)


BUILTIN_DATA = {
    "qtorus": (qtorus_data, "qtorus"),
    "mixed": (mixed_data, "mixed"),
    "mixed_b": (mixed_b_data, "mixed_op"),
    "corrupted": (corrupted_data, "qtorus"),
}


# -- psi and its inverse -----------------------------------------------------

def psi_forward(data: QuantizationData, P: SkewOperator) -> HSeries:
    if P.algebra.vars != data.vars:
        raise VariableError(f"operator over {P.algebra.vars}, data over {data.vars}")
    return op_apply(P, HSeries.constant(data.vars, data.order, 1))


def _as_series(data, f) -> HSeries:
    if isinstance(f, LaurentPoly):
        f = HSeries.from_poly(f, data.order)
    if f.vars != data.vars:
        raise VariableError(f"input over {f.vars}, data over {data.vars}")
    return f.truncate(min(f.order, data.order))


def psi_inverse(data: QuantizationData, f) -> SkewOperator:
    """The operator in the span of the A-monomials with ``P(1) = f``."""
    f = _as_series(data, f)
    n, D = f.order, data.degree
    out = {}
    rest = f
    for k in range(n + 1):
        for e, c in sorted(rest.coeff(k).terms.items()):
            if any(abs(b) > D for b in e):
                what = "input" if k == 0 and e in f.coeff(0).terms else "A-monomial span"
                raise SynthesisError(
                    f"monomial exponent {e} at h^{k} exceeds degree bound {D} ({what})"
                )
            op, image = data.a_monomial(e)
            lead = image.coeff(0)
            if lead != LaurentPoly.monomial(data.vars, e):
                raise SynthesisError(f"A^{e}(1) is not x^{e} modulo h; data outside scope")
            weight = HSeries.monomial(data.vars, n, (0,) * len(e), c, hpow=k)
            out[e] = out.get(e, 0) + weight
            rest = rest - weight * image.truncate(n)
        if rest.coeff(k):
            raise SynthesisError(f"triangular inversion stalled at h^{k}")
    alg = data.algebra
    result = alg.zero()
    for e, w in out.items():
        result = result + op_compose(alg.coeff(w), data.a_monomial(e)[0])
    return result


def synthesize_star(data: QuantizationData, f, g) -> HSeries:
    return psi_forward(data, op_compose(psi_inverse(data, f), psi_inverse(data, g)))


# -- checks ------------------------------------------------------------------

@dataclass
class SynthesisReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "pass" if self.passed else f"FAIL ({len(self.failures)} mismatches)"
        return f"{self.name}: {status} [{self.checked} checks]"


def _names(data):
    return [v.name for v in data.vars]


def verify_quantization_conditions(data: QuantizationData) -> SynthesisReport:
    """``A_i(1) = B_i(1) = x_i``, ``A_i = B_i = x_i`` mod h, ``[A_i, B_j] = 0``."""
    report = SynthesisReport(f"conditions:{data.name}")
    alg, basis = data.algebra, monomial_box(data.vars, data.degree)
    names = _names(data)

    def fail(check, **info):
        report.failures.append({"check": check, **info})

    for fam, ops in (("A", data.A), ("B", data.B)):
        for i, op in enumerate(ops):
            xi = alg.var(names[i])
            report.checked += 2
            got = psi_forward(data, op)
            if got != HSeries.var(data.vars, data.order, names[i]):
                fail("unit", operator=f"{fam}{i + 1}", got=series_to_doc(got))
            diff = op - xi
            for e in basis:
                img = op_apply(diff, HSeries.monomial(data.vars, data.order, e))
                if img.coeff(0):
                    fail("classical", operator=f"{fam}{i + 1}", monomial=list(e))
                    break
    for i, a in enumerate(data.A):
        for j, b in enumerate(data.B):
            report.checked += 1
            left, right = op_compose(a, b), op_compose(b, a)
            witness = basis_witness(left, right, data.degree, basis)
            if witness is not None or left != right:
                fail("commute", pair=f"[A{i + 1},B{j + 1}]",
                     witness=list(witness) if witness is not None else None)
    return report


def centralizer_check(data: QuantizationData, P: SkewOperator) -> list:
    """Indices ``j`` with ``[P, B_j] != 0``."""
    return [j for j, b in enumerate(data.B) if op_compose(P, b) != op_compose(b, P)]


def _admissible(vars_, e):
    return all(v.invertible or x >= 0 for v, x in zip(vars_, e))


def synthesis_crosscheck(
    data: QuantizationData,
    closed_form: StarAlgebra,
    degree: int | None = None,
    order: int | None = None,
    max_witnesses: int | None = None,
) -> SynthesisReport:
    """Compare the synthesized product with ``closed_form`` on monomial pairs.

    Variables are matched by name; pairs use monomials admissible in both
    layouts with ``|exponent| <= degree``.  Each mismatch is recorded as
    ``{pair, expected, got}``.
    """
    if degree is not None or order is not None:
        data = data.with_bounds(degree, order)
    target_vars = closed_form.vars
    names = _names(data)
    if sorted(names) != sorted(v.name for v in target_vars):
        raise VariableError(f"data variables {names} do not match {closed_form.tag}")
    perm = [names.index(v.name) for v in target_vars]
    report = SynthesisReport(f"synthesis:{data.name}~{closed_form.tag}")
    n = data.order
    mons = [e for e in monomial_box(data.vars, data.degree)
            if _admissible(target_vars, [e[i] for i in perm])]
    text = lambda s: series_to_text(s, closed_form.normal_order)  # noqa: E731
    weight = lambda e: sum(map(abs, e))  # noqa: E731
    pairs = sorted(((a, b) for a in mons for b in mons),
                   key=lambda p: (weight(p[0]) + weight(p[1]), p))
    for ea, eb in pairs:
        report.checked += 1
        fa = LaurentPoly.monomial(data.vars, ea)
        fb = LaurentPoly.monomial(data.vars, eb)
        got = synthesize_star(data, fa, fb)
        expected = star_mul(
            closed_form,
            HSeries.monomial(target_vars, n, [ea[i] for i in perm]),
            HSeries.monomial(target_vars, n, [eb[i] for i in perm]),
        )
        try:
            got_t = got.with_vars(target_vars)
        except VariableError:
            got_t = None
        if got_t != expected:
            report.failures.append({
                "pair": [text(HSeries.from_poly(fa.with_vars(target_vars), n)),
                         text(HSeries.from_poly(fb.with_vars(target_vars), n))],
                "expected": series_to_doc(expected),
                "got": series_to_doc(got),
            })
            if max_witnesses and len(report.failures) >= max_witnesses:
                return report
    return report
