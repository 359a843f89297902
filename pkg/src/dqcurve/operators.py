"""Normal-form calculus for skew operators with truncated-series coefficients.

An operator is a finite sum ``sum_a c_a * g^a`` with coefficients on the left
and generator powers on the right.  Each variable carries at most one
generator:

``D``  the derivation d/dx,            ``D o f = f D + f'``
``S``  the dilation exp(h x d/dx),     ``S o f = S(f) S``
``T``  the translation exp(h d/dx),    ``T o f = T(f) T``

``S`` and ``T`` are invertible and may carry negative powers; ``S^-1 o f =
S^-1(f) S^-1`` and likewise for ``T``.  Generators attached to different
variables commute.  Algebra tags fix the alphabet:

=================  ==========================================  ===========
tag                generators                                  variables
=================  ==========================================  ===========
``weyl``/``rees``  ``D`` per variable                          polynomial
``scaling[+]``     ``S`` (``+``: non-negative powers only)     invertible
``translation[+]`` ``T`` (``+``: non-negative powers only)     polynomial
``mixed``          any per-variable alphabet (internal use)    any
=================  ==========================================  ===========

A ``rees`` element additionally has the coefficient of ``D^k`` divisible
by ``h^|k|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from math import comb
from typing import Iterable


from .series import HSeries, LaurentPoly, Var, VariableError

__all__ = [
    "OperatorError",
    "OperatorAlgebra",
    "SkewOperator",
    "op_compose",
    "op_apply",
    "op_normal_form",
    "op_equal_on_basis",
    "basis_witness",
    "is_rees_element",
]

TAGS = ("weyl", "rees", "scaling", "scaling+", "translation", "translation+", "mixed")
INVERTIBLE_GENS = ("S", "T")


class OperatorError(ValueError):
    """Tag mismatch, closure violation, or a non-invertible power."""


@dataclass(frozen=True)
class OperatorAlgebra:
    tag: str
    vars: tuple
    alphabet: tuple
    order: int

    def __post_init__(self):
        if self.tag not in TAGS:
            raise OperatorError(f"unknown operator tag {self.tag!r}")
        if len(self.vars) != len(self.alphabet):
            raise OperatorError("alphabet must give one entry per variable")
        for v, g in zip(self.vars, self.alphabet):
            if g not in ("D", "S", "T", None):
                raise OperatorError(f"unknown generator kind {g!r}")
            if g == "T" and v.invertible:
                raise OperatorError(f"translation needs a polynomial variable, {v.name} is invertible")

    # -- constructors -------------------------------------------------------
    @classmethod
    def weyl(cls, n: int = 1, order: int = 6, rees: bool = False):
        names = ["x"] if n == 1 else [f"x{i}" for i in range(1, n + 1)]
        return cls("rees" if rees else "weyl", tuple(Var(s, False) for s in names), ("D",) * n, order)

    @classmethod
    def rees(cls, n: int = 1, order: int = 6):
        return cls.weyl(n, order, rees=True)

    @classmethod
    def scaling(cls, order: int = 6, plus: bool = False):
        return cls("scaling+" if plus else "scaling", (Var("x", True),), ("S",), order)

    @classmethod
    def translation(cls, order: int = 6, plus: bool = False):
        return cls("translation+" if plus else "translation", (Var("x", False),), ("T",), order)

    @classmethod
    def mixed(cls, vars_, alphabet, order: int = 6):
        return cls("mixed", tuple(vars_), tuple(alphabet), order)

    @classmethod
    def parse(cls, tag: str, order: int = 6):
        """CLI tags: ``weyl[:n]``, ``rees[:n]``, ``scaling[+]``, ``translation[+]``."""
        base, _, n = tag.partition(":")
        if base in ("weyl", "rees"):
            return cls.weyl(int(n) if n else 1, order, rees=base == "rees")
        if base in ("scaling", "scaling+") and not n:
            return cls.scaling(order, plus=base.endswith("+"))
        if base in ("translation", "translation+") and not n:
            return cls.translation(order, plus=base.endswith("+"))
        raise OperatorError(f"unknown operator algebra {tag!r}")

    def tag_string(self) -> str:
        if self.tag in ("weyl", "rees"):
            return f"{self.tag}:{len(self.vars)}"
        if self.tag == "mixed":
            return "mixed:" + ",".join(g or "-" for g in self.alphabet)
        return self.tag

    @classmethod
    def from_tag_string(cls, s: str, vars_, order: int):
        vars_ = tuple(vars_)
        if s.startswith("mixed:"):
            alphabet = tuple(None if g == "-" else g for g in s[6:].split(","))
            return cls.mixed(vars_, alphabet, order)
        alg = cls.parse(s, order)
        if alg.vars != vars_:
            raise OperatorError(f"{s} expects variables {alg.vars}, document has {vars_}")
        return alg

    def with_order(self, order: int):
        return OperatorAlgebra(self.tag, self.vars, self.alphabet, order)

    # -- queries ------------------------------------------------------------
    @property
    def plus(self) -> bool:
        return self.tag.endswith("+")

    def generator_names(self) -> tuple:
        """Display names: ``D``/``S``/``T`` for one variable, else suffixed by index."""
        if len(self.vars) == 1:
            return self.alphabet
        return tuple(None if g is None else f"{g}{i + 1}" for i, g in enumerate(self.alphabet))

    def generator_index(self, name: str) -> int:
        names = self.generator_names()
        if name in names:
            return names.index(name)
        raise OperatorError(f"unknown generator {name!r} for {self.tag_string()}")

    # -- element builders ---------------------------------------------------
    def _zero_powers(self):
        return (0,) * len(self.vars)

    def zero(self) -> "SkewOperator":
        return SkewOperator(self, {})

    def coeff(self, c) -> "SkewOperator":
        """Multiplication operator by a series, Laurent polynomial or scalar."""
        if isinstance(c, LaurentPoly):
            c = HSeries.from_poly(c, self.order)
        elif not isinstance(c, HSeries):
            c = HSeries.constant(self.vars, self.order, c)
        if c.vars != self.vars:
            raise VariableError(f"coefficient over {c.vars}, algebra over {self.vars}")
        c = c.truncate(self.order) if c.order >= self.order else c
        if c.order != self.order:
            raise OperatorError(f"coefficient truncated at {c.order} < {self.order}")
        return SkewOperator(self, {self._zero_powers(): c} if c else {})

    def one(self) -> "SkewOperator":
        return self.coeff(1)

    def hbar(self, power: int = 1) -> "SkewOperator":
        return self.coeff(HSeries.hbar(self.vars, self.order, power))

    def var(self, name=0, power: int = 1) -> "SkewOperator":
        if isinstance(name, int):
            name = self.vars[name].name
        return self.coeff(HSeries.var(self.vars, self.order, name, power))

    def gen(self, which=0, power: int = 1) -> "SkewOperator":
        """Generator power; ``which`` is a variable index or generator name."""
        i = self.generator_index(which) if isinstance(which, str) else which
        if self.alphabet[i] is None:
            raise OperatorError(f"variable {self.vars[i].name} carries no generator")
        powers = list(self._zero_powers())
        powers[i] = power
        return SkewOperator(self, {tuple(powers): HSeries.constant(self.vars, self.order, 1)})

    def term(self, coeff, powers) -> "SkewOperator":
        c = self.coeff(coeff).terms.get(self._zero_powers())
        return SkewOperator(self, {tuple(powers): c} if c else {})


class SkewOperator:
    """Immutable normal-form operator ``sum c_a g^a`` in an :class:`OperatorAlgebra`."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: OperatorAlgebra, terms: dict):
        self.algebra = algebra
        clean = {}
        for powers, c in terms.items():
            powers = tuple(int(p) for p in powers)
            if not c:
                continue
            if c.vars != algebra.vars or c.order != algebra.order:
                raise OperatorError("coefficient does not match the operator algebra")
            _check_powers(algebra, powers, c)
            clean[powers] = c
        self.terms = clean

    # -- protocol -----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, SkewOperator):
            return self.algebra == other.algebra and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __repr__(self):
        from .serialize import operator_to_text

        return f"SkewOperator[{self.algebra.tag_string()}]({operator_to_text(self)})"

    @property
    def vars(self):
        return self.algebra.vars

    @property
    def order(self):
        return self.algebra.order

    def coefficient(self, powers) -> HSeries:
        return self.terms.get(tuple(powers), HSeries.zero(self.vars, self.order))

    def powers(self):
        return sorted(self.terms)

    def retag(self, algebra: OperatorAlgebra) -> "SkewOperator":
        """Same terms viewed in a compatible algebra (e.g. scaling -> scaling+)."""
        if algebra.vars != self.algebra.vars or algebra.alphabet != self.algebra.alphabet:
            raise OperatorError("retag needs identical variables and alphabet")
        return SkewOperator(algebra, {p: c.truncate(algebra.order) for p, c in self.terms.items()})

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other) -> "SkewOperator":
        if isinstance(other, SkewOperator):
            if other.algebra != self.algebra:
                raise OperatorError(
                    f"algebra mismatch: {self.algebra.tag_string()} vs {other.algebra.tag_string()}"
                )
            return other
        return self.algebra.coeff(other)

    def _combine(self, other, sign):
        other = self._lift(other)
        out = dict(self.terms)
        for p, c in other.terms.items():
            c = c if sign > 0 else -c
            v = out[p] + c if p in out else c
            if v:
                out[p] = v
            else:
                out.pop(p, None)
        return SkewOperator(self.algebra, out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return SkewOperator(self.algebra, {p: -c for p, c in self.terms.items()})

    def __mul__(self, other):
        return op_compose(self, self._lift(other))

    def __rmul__(self, other):
        return op_compose(self._lift(other), self)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.algebra.one()
        for _ in range(k):
            out = op_compose(out, self)
        return out

    def inverse(self) -> "SkewOperator":
        """Inverse of a single term ``u x^e g^a`` with ``u(0) != 0`` and ``g`` in {S, T}."""
        if len(self.terms) != 1:
            raise OperatorError("only single-term operators are inverted")
        ((powers, c),) = self.terms.items()
        for g, p in zip(self.algebra.alphabet, powers):
            if p and g not in INVERTIBLE_GENS:
                raise OperatorError(f"generator {g} is not invertible")
        try:
            cinv = c.inverse()
        except VariableError as exc:
            raise OperatorError(f"coefficient is not a unit: {exc}") from exc
        neg = tuple(-p for p in powers)
        out = {}
        for s, pw in _pass_through(self.algebra, neg, cinv):
            out[pw] = out[pw] + s if pw in out else s
        return SkewOperator(self.algebra, out)

    def __call__(self, f):
        return op_apply(self, f)


def _check_powers(alg: OperatorAlgebra, powers, coeff: HSeries) -> None:
    if len(powers) != len(alg.vars):
        raise OperatorError(f"power vector {powers} has wrong length")
    for g, p in zip(alg.alphabet, powers):
        if g is None and p:
            raise OperatorError("power on a variable without generator")
        if p < 0 and g not in INVERTIBLE_GENS:
            raise OperatorError(f"negative power of {g}")
        if p < 0 and alg.plus:
            raise OperatorError(f"{alg.tag} admits only non-negative powers (got {p})")
    if alg.tag == "rees":
        v = coeff.valuation()
        if v is not None and v < sum(powers):
            raise OperatorError(
                f"not a Rees element: coefficient of D^{powers} has h-valuation {v} < {sum(powers)}"
            )


def _pass_through(alg: OperatorAlgebra, powers, c: HSeries):
    """Rewrite ``g^powers o c`` as ``[(c_j, powers_j)]`` with coefficients left."""
    items = [(c, (0,) * len(powers))]
    for i, p in enumerate(powers):
        if not p:
            continue
        kind, name = alg.alphabet[i], alg.vars[i].name
        new = []
        for s, pw in items:
            if kind == "D":
                d = s
                for j in range(p + 1):
                    if not d:
                        break
                    new.append((d.scale(comb(p, j)), pw[:i] + (p - j,) + pw[i + 1:]))
                    if j < p:
                        d = d.derive(name)
            elif kind == "S":
                new.append((s.dilate(name, p), pw[:i] + (p,) + pw[i + 1:]))
            else:
                new.append((s.translate(name, p), pw[:i] + (p,) + pw[i + 1:]))
        items = new
    return items


def op_compose(P: SkewOperator, Q: SkewOperator) -> SkewOperator:
    """Normal form of ``P o Q``."""
    if P.algebra != Q.algebra:
        raise OperatorError(
            f"algebra mismatch: {P.algebra.tag_string()} vs {Q.algebra.tag_string()}"
        )
    out = {}
    for alpha, a in P.terms.items():
        for beta, b in Q.terms.items():
            for c, gamma in _pass_through(P.algebra, alpha, b):
                key = tuple(i + j for i, j in zip(gamma, beta))
                prod = a * c
                if key in out:
                    out[key] = out[key] + prod
                else:
                    out[key] = prod
    return SkewOperator(P.algebra, {k: v for k, v in out.items() if v})


def _act(alg: OperatorAlgebra, powers, f: HSeries) -> HSeries:
    for i, p in enumerate(powers):
        if not p:
            continue
        kind, name = alg.alphabet[i], alg.vars[i].name
        if kind == "D":
            for _ in range(p):
                f = f.derive(name)
        elif kind == "S":
            f = f.dilate(name, p)
        else:
            f = f.translate(name, p)
    return f


def op_apply(P: SkewOperator, f) -> HSeries:
    """Left action of ``P`` on a series over the same variables."""
    alg = P.algebra
    if isinstance(f, LaurentPoly):
        f = HSeries.from_poly(f, alg.order)
    if f.vars != alg.vars:
        raise VariableError(f"cannot apply operator over {alg.vars} to series over {f.vars}")
    n = min(f.order, alg.order)
    f = f.truncate(n)
    out = HSeries.zero(alg.vars, n)
    for powers, c in P.terms.items():
        out = out + c.truncate(n) * _act(alg, powers, f)
    return out


def _letter(alg: OperatorAlgebra, letter) -> SkewOperator:
    if isinstance(letter, SkewOperator):
        return letter
    if isinstance(letter, tuple):
        base, power = letter
        return _letter(alg, base) ** power
    if isinstance(letter, str):
        if letter == "h":
            return alg.hbar()
        if letter.endswith("inv"):
            return alg.gen(letter[:-3], -1)
        if any(v.name == letter for v in alg.vars):
            return alg.var(letter)
        return alg.gen(letter)
    return alg.coeff(letter)


def op_normal_form(word, algebra: OperatorAlgebra | None = None) -> SkewOperator:
    """Normal form of a word: a product of letters, composed left to right.

    Letters are operators, series/scalars (multiplication operators), or
    strings naming a generator (``"S"``, ``"Sinv"``, ``"D1"``), a variable,
    or ``"h"``; ``(letter, k)`` denotes a signed power.  An operator given
    directly is already in normal form and is returned unchanged.
    """
    if isinstance(word, SkewOperator):
        return SkewOperator(word.algebra, word.terms)
    letters = list(word)
    if algebra is None:
        found = [x for x in letters if isinstance(x, SkewOperator)]
        if not found:
            raise OperatorError("word has no operator letter; pass the algebra")
        algebra = found[0].algebra
    out = algebra.one()
    for letter in letters:
        out = op_compose(out, _letter(algebra, letter))
    return out


def default_basis(vars_, p_max: int):
    """Exponent vectors with entries in 0..p_max and total degree <= p_max."""
    ranges = [range(p_max + 1)] * len(vars_)
    return [e for e in cartesian(*ranges) if sum(e) <= p_max]


def basis_witness(P: SkewOperator, Q: SkewOperator, p_max: int, basis: Iterable | None = None):
    """First basis monomial on which ``P`` and ``Q`` act differently, else None."""
    if P.algebra != Q.algebra:
        raise OperatorError("cannot compare operators from different algebras")
    alg = P.algebra
    R = P - Q
    if not R:
        return None
    for e in basis if basis is not None else default_basis(alg.vars, p_max):
        xp = HSeries.monomial(alg.vars, alg.order, e)
        if op_apply(R, xp):
            return tuple(e)
    return None


def op_equal_on_basis(P: SkewOperator, Q: SkewOperator, p_max: int, basis=None) -> bool:
    """True iff ``P(x^p) == Q(x^p)`` modulo ``h^(N+1)`` for every basis monomial.

    For scaling/translation operators the eigenvalues ``exp(p h)`` (resp.
    shifts ``x + k h``) separate distinct generator powers, so once
    ``p_max`` is at least the number of distinct powers occurring in
    ``P - Q``, agreement certifies equality as truncated operators.
    """
    return basis_witness(P, Q, p_max, basis) is None


def is_rees_element(P: SkewOperator) -> bool:
    """Each coefficient of ``D^k`` has h-valuation at least ``|k|``."""
    if P.algebra.tag not in ("weyl", "rees"):
        raise OperatorError(f"Rees membership is defined for weyl/rees, not {P.algebra.tag}")
    for powers, c in P.terms.items():
        if c.valuation() < sum(powers):
            return False
    return True


def as_rees(P: SkewOperator) -> SkewOperator:
    """View a weyl operator in the Rees algebra (raises if it is not Rees)."""
    alg = P.algebra
    target = OperatorAlgebra("rees", alg.vars, alg.alphabet, alg.order)
    return SkewOperator(target, P.terms)
