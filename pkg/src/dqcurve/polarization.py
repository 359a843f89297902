"""Polarizations: how the ambient coordinates act on functions of the base.

=============  ==========  ==================  =============================
kind           ambient     Lagrangian          action on f(x)
=============  ==========  ==================  =============================
``weyl``       moyal:1     u = 0               x.f = x f,   u.f = h f'
``qtorus_pol`` qtorus      x2 = 1              x1.f = x f,  x2.f = S f
``hurwitz``    mixed       x2 = 0              x1.f = x f,  x2.f = h x f'
``gw``         mixed_op    x1 = 1              x2.f = x f,  x1.f = T f
=============  ==========  ==================  =============================

An ambient monomial is read in the ordering where its star product equals
the commutative product (base coordinate first for weyl/qtorus/hurwitz,
``x2`` before ``x1`` under the opposite product for gw), so the action
of a polynomial is the composite of the generator actions and
``(a * b).f = a.(b.f)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .operators import OperatorAlgebra, OperatorError, SkewOperator, op_apply, op_compose
from .series import HSeries, LaurentPoly, Var, VariableError
from .star import StarAlgebra
from .symbols import SymbolMap

__all__ = [
    "Polarization",
    "POLARIZATIONS",
    "polar_apply",
    "to_base_operator",
    "annihilator_kernel",
    "kernel_agreement",
]

# kind: (ambient, base invertible, base coordinate, fiber coordinate, fixed value, alphabet, sources)
_TABLE = {
    "weyl": ("moyal:1", False, "x", "u", 0, "D", ("weyl", "rees")),
    "qtorus_pol": ("qtorus", True, "x1", "x2", 1, "S", ("scaling", "scaling+")),
    "hurwitz": ("mixed", True, "x1", "x2", 0, "D", ("mixed",)),
    "gw": ("mixed_op", False, "x2", "x1", 1, "T", ("translation", "translation+")),
}
POLARIZATIONS = tuple(_TABLE)
_MAP_FOR = {
    "rees_to_moyal": "weyl",
    "scaling_to_qtorus": "qtorus_pol",
    "translation_to_mixed_op": "gw",
}


@dataclass(frozen=True)
class Polarization:
    kind: str

    def __post_init__(self):
        if self.kind not in _TABLE:
            raise ValueError(f"unknown polarization {self.kind!r}; expected one of {POLARIZATIONS}")

    @property
    def ambient(self) -> StarAlgebra:
        return StarAlgebra.parse(_TABLE[self.kind][0])

    @property
    def base_var(self) -> Var:
        return Var("x", _TABLE[self.kind][1])

    @property
    def vars(self):
        return (self.base_var,)

    @property
    def base_coordinate(self) -> str:
        return _TABLE[self.kind][2]

    @property
    def fiber_coordinate(self) -> str:
        return _TABLE[self.kind][3]

    @property
    def lagrangian(self) -> tuple[str, int]:
        """The ambient coordinate fixed on the Lagrangian and its value."""
        return self.fiber_coordinate, _TABLE[self.kind][4]

    @property
    def sources(self) -> tuple:
        return _TABLE[self.kind][6]

    def operator_algebra(self, order: int) -> OperatorAlgebra:
        if self.kind == "weyl":
            return OperatorAlgebra.weyl(1, order)
        if self.kind == "qtorus_pol":
            return OperatorAlgebra.scaling(order)
        if self.kind == "gw":
            return OperatorAlgebra.translation(order)
        return OperatorAlgebra.mixed(self.vars, ("D",), order)

    def table(self, order: int) -> dict:
        """Ambient coordinate -> operator on the base."""
        alg = self.operator_algebra(order)
        x = alg.var("x")
        if self.kind == "weyl":
            fiber = alg.hbar() * alg.gen()
        elif self.kind == "hurwitz":
            fiber = alg.hbar() * x * alg.gen()
        else:
            fiber = alg.gen()
        return {self.base_coordinate: x, self.fiber_coordinate: fiber}

    def __str__(self):
        return self.kind


def _base_series(pol: Polarization, f, order=None) -> HSeries:
    if isinstance(f, LaurentPoly):
        f = HSeries.from_poly(f, order if order is not None else 0)
    if f.vars != pol.vars:
        raise VariableError(f"{pol.kind} acts on series over {pol.vars}, got {f.vars}")
    return f


def _split(pol: Polarization, exps):
    names = [v.name for v in pol.ambient.vars]
    e = dict(zip(names, exps))
    return e[pol.base_coordinate], e[pol.fiber_coordinate]


def _act_fiber(pol: Polarization, b: int, f: HSeries) -> HSeries:
    """Apply the fiber coordinate ``b`` times using the table's rule."""
    if pol.kind == "qtorus_pol":
        return f.dilate("x", b)
    if pol.kind == "gw":
        return f.translate("x", b)
    for _ in range(b):
        g = f.derive("x")
        if pol.kind == "hurwitz":
            g = g * HSeries.var(pol.vars, f.order, "x")
        f = g.shift(1)
    return f


def _ambient_apply(pol: Polarization, a: HSeries, f: HSeries) -> HSeries:
    if a.vars != pol.ambient.vars:
        raise VariableError(f"ambient element over {a.vars}, {pol.kind} expects {pol.ambient.vars}")
    n = min(a.order, f.order)
    f = f.truncate(n)
    out = HSeries.zero(pol.vars, n)
    groups = {}
    for (k, e), c in a.terms.items():
        groups.setdefault(e, []).append((k, c))
    for e, coeffs in sorted(groups.items()):
        base, fib = _split(pol, e)
        if fib < 0 and pol.kind in ("weyl", "hurwitz"):
            raise OperatorError(f"negative power of {pol.fiber_coordinate} has no action")
        g = _act_fiber(pol, fib, f)
        scal = HSeries(pol.vars, n, {(k, (base,)): c for k, c in coeffs if k <= n})
        out = out + scal * g
    return out


def polar_apply(pol: Polarization, a, f) -> HSeries:
    """Action of an ambient series, or of a source-algebra operator, on ``f``."""
    if isinstance(a, SkewOperator):
        if a.algebra.tag not in pol.sources or a.algebra.vars != pol.vars:
            raise OperatorError(f"{pol.kind} does not act by {a.algebra.tag_string()} operators")
        return op_apply(a, _base_series(pol, f, a.algebra.order))
    return _ambient_apply(pol, a, _base_series(pol, f, a.order))


def to_base_operator(pol: Polarization, a: HSeries) -> SkewOperator:
    """The operator on the base by which the ambient series ``a`` acts."""
    table = pol.table(a.order)
    alg = table[pol.base_coordinate].algebra
    out = alg.zero()
    for (k, e), c in sorted(a.terms.items()):
        base, fib = _split(pol, e)
        coeff = alg.coeff(HSeries.monomial(pol.vars, a.order, (base,), c, hpow=k))
        out = out + op_compose(coeff, table[pol.fiber_coordinate] ** fib)
    return out


def _ansatz(pol: Polarization, degree: int):
    lo = -degree if pol.base_var.invertible else 0
    return [(p,) for p in range(lo, degree + 1)]


def annihilator_kernel(P, pol: Polarization, degree: int, order: int) -> list:
    """Echelon basis of the degree-bounded solutions of ``P.f = 0`` mod ``h^(N+1)``.

    Unknowns are the rational coefficients of ``h^k x^p`` (``k <= N``, ``p``
    in the ansatz box).  The full system over orders ``0..N`` is solved
    exactly; the kernel is spanned by the leading (``h^0``) parts of its
    solutions, reduced to echelon form, and each basis element is lifted to
    the canonical solution whose free higher-order unknowns vanish.
    Leading parts that cannot be completed through order ``N`` are dropped,
    so pure truncation artifacts such as ``h^N g`` do not appear.
    """
    mons = _ansatz(pol, degree)
    n = order
    if isinstance(P, SkewOperator):
        P = P.retag(P.algebra.with_order(n)) if P.algebra.order >= n else P
        act = lambda f: polar_apply(pol, P, f)  # noqa: E731
    else:
        if P.order < n:
            raise ValueError(f"ambient element truncated at {P.order} < {n}")
        P = P.truncate(n)
        act = lambda f: _ambient_apply(pol, P, f)  # noqa: E731
    images = [act(HSeries.monomial(pol.vars, n, e)) for e in mons]
    if any(img.order < n for img in images):
        raise ValueError("operator truncated below the requested order")

    m = len(mons)
    ncols = (n + 1) * m  # column (k, i) -> k * m + i
    rows = {}
    for i, img in enumerate(images):
        for (j, e), c in img.terms.items():
            for k in range(n + 1 - j):
                row = rows.setdefault((j + k, e), {})
                row[k * m + i] = c
    matrix = []
    for key in sorted(rows):
        dense = [0] * ncols
        for col, c in rows[key].items():
            dense[col] = c
        matrix.append(dense)

    null = linalg.nullspace(matrix, ncols)
    leading = linalg.row_space_basis([v[:m] for v in null], m)
    basis = []
    for v in leading:
        rest_rows = [r[m:] for r in matrix]
        rhs = [-sum(a * b for a, b in zip(r[:m], v)) for r in matrix]
        tail = linalg.solve(rest_rows, rhs, ncols - m)
        full = list(v) + tail
        terms = {}
        for col, c in enumerate(full):
            if c:
                terms[(col // m, mons[col % m])] = c
        basis.append(HSeries(pol.vars, n, terms))
    return basis


def kernel_agreement(P: SkewOperator, pol: Polarization, smap: SymbolMap, degree: int, order: int) -> bool:
    """Kernel of ``P`` acting directly equals that of ``smap(P)`` acting through ``pol``."""
    if _MAP_FOR[smap.kind] != pol.kind:
        raise ValueError(f"{smap.kind} does not land in the {pol.kind} ambient algebra")
    image = smap(P)
    order = min(order, image.order)
    direct = annihilator_kernel(P, pol, degree, order)
    embedded = annihilator_kernel(image, pol, degree, order)
    return direct == embedded
