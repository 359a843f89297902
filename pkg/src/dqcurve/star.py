"""Closed-form star products on the three symplectic surfaces.

* ``moyal(n)`` on T*C^n, coordinates ``x1..xn, u1..un`` (``x, u`` when n=1):
  ``f * g = sum_a h^|a|/a! (d_u^a f)(d_x^a g)``.
* ``qtorus`` on C* x C*, both coordinates invertible:
  ``f * g = sum_k h^k/k! (x2 d_x2)^k f (x1 d_x1)^k g``.
* ``mixed`` on C* x C (x1 invertible):
  ``f * g = sum_k h^k/k! d_x2^k f (x1 d_x1)^k g``.
* ``mixed_op``: the opposite product, ``f (*) g = g * f`` for ``mixed``.

Each bidifferential term is evaluated by repeatedly applying the
derivations of :mod:`dqcurve.series`; the k-sums stop at the truncation
order since ``h^k`` vanishes beyond it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable

from gmpy2 import mpq

from .sampling import SampleSpec, random_rational, series_from_spec
from .series import HSeries, LaurentPoly, Var, VariableError
from .serialize import series_to_doc, series_to_text

__all__ = [
    "StarAlgebra",
    "star_mul",
    "sigma0",
    "star_commutator",
    "poisson_bracket",
    "StarReport",
    "verify_star_axioms",
    "ALGEBRAS",
]

KINDS = ("moyal", "qtorus", "mixed", "mixed_op")


@dataclass(frozen=True)
class StarAlgebra:
    kind: str
    n: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown star algebra {self.kind!r}; expected one of {KINDS}")
        if self.kind != "moyal" and self.n != 1:
            raise ValueError(f"{self.kind} is a surface; n must be 1")
        if self.n < 1:
            raise ValueError("moyal needs n >= 1")

    @classmethod
    def parse(cls, tag: str) -> "StarAlgebra":
        """From the CLI/file tag: ``moyal:<n>``, ``qtorus``, ``mixed``, ``mixed_op``."""
        if tag.startswith("moyal"):
            _, _, n = tag.partition(":")
            return cls("moyal", int(n) if n else 1)
        if tag == "mixed_opposite":
            tag = "mixed_op"
        return cls(tag)

    @property
    def tag(self) -> str:
        return f"moyal:{self.n}" if self.kind == "moyal" else self.kind

    @property
    def base_names(self) -> tuple[str, ...]:
        if self.kind == "moyal":
            return ("x",) if self.n == 1 else tuple(f"x{i}" for i in range(1, self.n + 1))
        return ("x1",)

    @property
    def fiber_names(self) -> tuple[str, ...]:
        if self.kind == "moyal":
            return ("u",) if self.n == 1 else tuple(f"u{i}" for i in range(1, self.n + 1))
        return ("x2",)

    @property
    def vars(self) -> tuple[Var, ...]:
        if self.kind == "moyal":
            return tuple(Var(n, False) for n in self.base_names + self.fiber_names)
        if self.kind == "qtorus":
            return (Var("x1", True), Var("x2", True))
        return (Var("x1", True), Var("x2", False))

    @property
    def normal_order(self) -> tuple[str, ...]:
        """Variable order in which star product of factors = commutative product."""
        if self.kind == "mixed_op":
            return ("x2", "x1")
        return tuple(v.name for v in self.vars)

    def series(self, order, terms=None) -> HSeries:
        return HSeries(self.vars, order, terms or {})

    def var(self, name, order) -> HSeries:
        return HSeries.var(self.vars, order, name)

    def __str__(self):
        return self.tag


ALGEBRAS = (
    StarAlgebra("moyal", 1),
    StarAlgebra("moyal", 2),
    StarAlgebra("qtorus"),
    StarAlgebra("mixed"),
    StarAlgebra("mixed_op"),
)


def _check_operands(alg: StarAlgebra, f: HSeries, g: HSeries) -> None:
    for s in (f, g):
        if s.vars != alg.vars:
            raise VariableError(f"operand over {s.vars}, algebra {alg.tag} needs {alg.vars}")
    if f.order != g.order:
        raise ValueError(f"truncation mismatch: {f.order} vs {g.order}")


def _accumulate(out: dict, F: HSeries, G: HSeries, shift: int, weight: mpq, n: int) -> None:
    """out += weight * h^shift * F * G, truncated at h^n."""
    lim_total = n - shift
    g_items = sorted(G.terms.items())
    for (j1, e1), c1 in F.terms.items():
        lim = lim_total - j1
        if lim < 0:
            continue
        c1w = c1 * weight
        for (j2, e2), c2 in g_items:
            if j2 > lim:
                break
            key = (j1 + j2 + shift, tuple(a + b for a, b in zip(e1, e2)))
            out[key] = out.get(key, 0) + c1w * c2


def _euler_sum(f, g, left_op, right_op, n) -> HSeries:
    """sum_k h^k/k! left_op^k(f) right_op^k(g) for one-dof products."""
    out = {}
    F, G = f, g
    for k in range(n + 1):
        if not F or not G:
            break
        _accumulate(out, F, G, k, mpq(1, factorial(k)), n)
        if k < n:
            F = left_op(F).truncate(n - k - 1)
            G = right_op(G).truncate(n - k - 1)
    return HSeries(f.vars, n, {k: c for k, c in out.items() if c}, _trusted=True)


def _moyal(alg, f, g, n) -> HSeries:
    xs, us = alg.base_names, alg.fiber_names
    dim = len(xs)
    out = {}
    # breadth-first over multi-indices; a zero derivative prunes its cone
    frontier = {(0,) * dim: (f, g)}
    seen = set()
    for total in range(n + 1):
        nxt = {}
        for alpha, (F, G) in frontier.items():
            weight = mpq(1)
            for a in alpha:
                weight /= factorial(a)
            _accumulate(out, F, G, total, weight, n)
            if total == n:
                continue
            for i in range(dim):
                beta = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
                if beta in seen:
                    continue
                seen.add(beta)
                F2 = F.derive(us[i]).truncate(n - total - 1)
                G2 = G.derive(xs[i]).truncate(n - total - 1)
                if F2 and G2:
                    nxt[beta] = (F2, G2)
        frontier = nxt
        if not frontier:
            break
    return HSeries(f.vars, n, {k: c for k, c in out.items() if c}, _trusted=True)


def star_mul(alg: StarAlgebra, f: HSeries, g: HSeries) -> HSeries:
    """Exact star product of ``f`` and ``g`` modulo ``h^(N+1)``."""
    _check_operands(alg, f, g)
    n = f.order
    if alg.kind == "moyal":
        return _moyal(alg, f, g, n)
    if alg.kind == "qtorus":
        return _euler_sum(f, g, lambda s: s.euler("x2"), lambda s: s.euler("x1"), n)
    if alg.kind == "mixed":
        return _euler_sum(f, g, lambda s: s.derive("x2"), lambda s: s.euler("x1"), n)
    return _euler_sum(g, f, lambda s: s.derive("x2"), lambda s: s.euler("x1"), n)


def sigma0(f: HSeries) -> LaurentPoly:
    """Semiclassical symbol: reduction modulo h."""
    return f.sigma0()


def star_commutator(alg: StarAlgebra, f: HSeries, g: HSeries) -> HSeries:
    return star_mul(alg, f, g) - star_mul(alg, g, f)


def poisson_bracket(alg: StarAlgebra, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """``sigma0(h^-1 [f, g])`` for functions embedded at order h^0."""
    if f.vars != alg.vars or g.vars != alg.vars:
        raise VariableError(f"bracket operands must live over {alg.vars}")
    c = star_commutator(alg, HSeries.from_poly(f, 1), HSeries.from_poly(g, 1))
    assert not c.coeff(0), "commutator has a nonzero classical part"
    return c.coeff(1)


# -- axiom verification ------------------------------------------------------

@dataclass
class StarReport:
    algebra: str
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def _count(self, name):
        self.checks[name] = self.checks.get(name, 0) + 1

    def record(self, name, ok, **witness):
        self._count(name)
        if not ok:
            self.failures.append({"check": name, **witness})

    def summary(self) -> str:
        status = "pass" if self.passed else f"FAIL ({len(self.failures)} counterexamples)"
        counts = ", ".join(f"{k}={v}" for k, v in sorted(self.checks.items()))
        return f"{self.algebra}: {status} [{counts}]"


AXIOM_CHECKS = ("unit", "bilinear", "sigma0", "assoc")


def verify_star_axioms(
    alg: StarAlgebra,
    spec: SampleSpec = SampleSpec(),
    checks=("unit", "bilinear", "sigma0", "assoc"),
    product: Callable[[HSeries, HSeries], HSeries] | None = None,
    max_witnesses: int = 5,
) -> StarReport:
    """Check the star-product axioms on seeded random inputs.

    ``product`` overrides the multiplication under test (used for negative
    controls); by default it is :func:`star_mul` for ``alg``.  Failures are
    recorded with the offending inputs in text form.
    """
    for c in checks:
        if c not in AXIOM_CHECKS:
            raise ValueError(f"unknown check {c!r}")
    mul = product or (lambda a, b: star_mul(alg, a, b))
    rng = spec.rng(f"axioms:{alg.tag}")
    report = StarReport(alg.tag)
    vars_, n = alg.vars, spec.order
    txt = lambda s: series_to_text(s, alg.normal_order)  # noqa: E731
    one = HSeries.constant(vars_, n, 1)
    hb = HSeries.hbar(vars_, n)

    def record(name, lhs, rhs, **inputs):
        if len(report.failures) >= max_witnesses and lhs != rhs:
            report._count(name)
            return
        report.record(
            name, lhs == rhs,
            inputs={k: txt(v) for k, v in inputs.items()},
            lhs=series_to_doc(lhs) if lhs != rhs else None,
            rhs=series_to_doc(rhs) if lhs != rhs else None,
        )

    for _ in range(spec.samples):
        f = series_from_spec(rng, vars_, spec)
        g = series_from_spec(rng, vars_, spec)
        hh = series_from_spec(rng, vars_, spec)
        a, b = random_rational(rng), random_rational(rng)
        fg = mul(f, g)
        if "unit" in checks:
            record("unit", mul(one, f), f, f=f)
            record("unit", mul(f, one), f, f=f)
        if "bilinear" in checks:
            record("bilinear", mul(f.scale(a) + hh.scale(b), g),
                   fg.scale(a) + mul(hh, g).scale(b), f=f, g=g, h=hh)
            record("bilinear", mul(f, g.scale(a) + hh.scale(b)),
                   fg.scale(a) + mul(f, hh).scale(b), f=f, g=g, h=hh)
            record("bilinear", mul(hb * f, g), hb * fg, f=f, g=g)
            record("bilinear", mul(f, hb * g), hb * fg, f=f, g=g)
        if "sigma0" in checks:
            lhs = HSeries.from_poly(fg.sigma0(), n)
            rhs = HSeries.from_poly(f.sigma0() * g.sigma0(), n)
            record("sigma0", lhs, rhs, f=f, g=g)
        if "assoc" in checks:
            record("assoc", mul(fg, hh), mul(f, mul(g, hh)), f=f, g=g, h=hh)
    return report
