"""Exact hbar-truncated series over multivariate Laurent polynomials.

Coefficients are exact rationals (``gmpy2.mpq``).  A :class:`LaurentPoly`
is a finite map from signed exponent vectors to rationals; an
:class:`HSeries` is a polynomial in ``h`` (standing for hbar) whose
coefficients are Laurent polynomials, truncated at a fixed order ``N``:
everything is computed modulo ``h**(N+1)``.

Both types are immutable.  Arithmetic between operands requires identical
variable lists (names *and* invertibility flags); mixed truncation orders
truncate to the smaller one.
"""

from __future__ import annotations

from collections import namedtuple
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping

from gmpy2 import mpq

__all__ = [
    "Var",
    "VariableError",
    "rational",
    "make_vars",
    "LaurentPoly",
    "HSeries",
    "exp_hbar",
    "stirling",
]

class Var(namedtuple("Var", "name invertible")):
    """A coordinate; ``invertible`` allows negative exponents (a C* factor)."""

    __slots__ = ()

    def __repr__(self):
        return self.name + ("*" if self.invertible else "")


class VariableError(ValueError):
    """Unknown variable, mismatched variable lists, or a bad exponent."""


def rational(value) -> mpq:
    """Coerce int, Fraction, str ("3/4") or mpq to an exact rational."""
    if isinstance(value, mpq):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Fraction, str)):
        return mpq(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def make_vars(*specs) -> tuple[Var, ...]:
    """``make_vars("x1*", "x2")`` -> invertible x1, polynomial x2.

    Also accepts ``(name, invertible)`` pairs and :class:`Var` instances.
    """
    out = []
    for s in specs:
        if isinstance(s, Var):
            out.append(s)
        elif isinstance(s, str):
            out.append(Var(s.rstrip("*"), s.endswith("*")))
        else:
            name, inv = s
            out.append(Var(name, bool(inv)))
    names = [v.name for v in out]
    if len(set(names)) != len(names):
        raise VariableError(f"duplicate variable names in {names}")
    return tuple(out)


def _index(vars_, var) -> int:
    if isinstance(var, int):
        if not 0 <= var < len(vars_):
            raise VariableError(f"variable index {var} out of range")
        return var
    for i, v in enumerate(vars_):
        if v.name == var:
            return i
    raise VariableError(f"unknown variable {var!r}; have {[v.name for v in vars_]}")


def _check_exps(vars_, exps) -> None:
    if len(exps) != len(vars_):
        raise VariableError(f"exponent vector {exps} does not match {len(vars_)} variables")
    for v, e in zip(vars_, exps):
        if e < 0 and not v.invertible:
            raise VariableError(f"negative exponent {e} on non-invertible variable {v.name}")


def _add_exps(a, b):
    return tuple(i + j for i, j in zip(a, b))


def _same_vars(a, b) -> None:
    if a.vars != b.vars:
        raise VariableError(f"variable lists differ: {a.vars} vs {b.vars}")


class LaurentPoly:
    """Finite sum of ``c * x**e`` with exact rational ``c`` and signed ``e``."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars_, terms: Mapping | None = None, *, _trusted=False):
        self.vars = tuple(vars_)
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            _check_exps(self.vars, exps)
            c = rational(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, vars_):
        return cls(vars_, {}, _trusted=True)

    @classmethod
    def constant(cls, vars_, c):
        c = rational(c)
        return cls(vars_, {(0,) * len(vars_): c} if c else {}, _trusted=True)

    @classmethod
    def monomial(cls, vars_, exps, c=1):
        return cls(vars_, {tuple(exps): c})

    @classmethod
    def var(cls, vars_, name):
        i = _index(vars_, name)
        e = [0] * len(vars_)
        e[i] = 1
        return cls(vars_, {tuple(e): mpq(1)}, _trusted=True)

    # -- basic protocol -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"LaurentPoly({_poly_text(self.vars, self.terms) or '0'})"

    def is_constant(self) -> bool:
        zero = (0,) * len(self.vars)
        return all(e == zero for e in self.terms)

    def constant_term(self) -> mpq:
        return self.terms.get((0,) * len(self.vars), mpq(0))

    def degree_box(self) -> tuple[tuple[int, int], ...]:
        """Per-variable (min, max) exponent; empty poly gives (0, 0)."""
        if not self.terms:
            return tuple((0, 0) for _ in self.vars)
        cols = list(zip(*self.terms))
        return tuple((min(c), max(c)) for c in cols)

    # -- arithmetic ---------------------------------------------------------
    def _combine(self, other, sign):
        _same_vars(self, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + sign * c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly(self.vars, out, _trusted=True)

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.vars, other)
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.vars, other)
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def scale(self, c):
        c = rational(c)
        if not c:
            return LaurentPoly.zero(self.vars)
        return LaurentPoly(self.vars, {e: c * v for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        _same_vars(self, other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.vars, {e: c for e, c in out.items() if c}, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise VariableError("only monomials have Laurent inverses")
            ((e, c),) = self.terms.items()
            return LaurentPoly(self.vars, {tuple(i * k for i in e): mpq(1) / c ** (-k)})
        out = LaurentPoly.constant(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus -----------------------------------------------------------
    def derive(self, var):
        i = _index(self.vars, var)
        out = {}
        for e, c in self.terms.items():
            p = e[i]
            if p:
                ne = e[:i] + (p - 1,) + e[i + 1:]
                out[ne] = c * p
        return LaurentPoly(self.vars, out, _trusted=True)

    def euler(self, var):
        i = _index(self.vars, var)
        return LaurentPoly(
            self.vars, {e: c * e[i] for e, c in self.terms.items() if e[i]}, _trusted=True
        )

    def with_vars(self, vars_, mapping: Mapping[str, str] | None = None):
        """Re-express over another variable list, renaming via ``mapping``.

        Variables absent from the target must not occur in the polynomial.
        """
        vars_ = tuple(vars_)
        mapping = mapping or {}
        pos = []
        for v in self.vars:
            name = mapping.get(v.name, v.name)
            pos.append(_index(vars_, name) if any(w.name == name for w in vars_) else None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars_)
            for p, k in zip(pos, e):
                if k:
                    if p is None:
                        raise VariableError("polynomial uses a variable missing from target")
                    ne[p] += k
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return LaurentPoly(vars_, out)


class HSeries:
    """``sum_k h**k * c_k`` with Laurent-polynomial ``c_k``, modulo ``h**(order+1)``.

    Stored flat as ``{(hpow, exps): coefficient}``; zero terms are never kept.
    """

    __slots__ = ("vars", "order", "terms")

    def __init__(self, vars_, order: int, terms: Mapping | None = None, *, _trusted=False):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.vars = tuple(vars_)
        self.order = int(order)
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for (k, exps), c in (terms or {}).items():
            if k < 0:
                raise ValueError("negative hbar power in an HSeries")
            if k > order:
                continue
            exps = tuple(int(e) for e in exps)
            _check_exps(self.vars, exps)
            c = rational(c)
            key = (int(k), exps)
            clean[key] = clean.get(key, 0) + c
        self.terms = {key: c for key, c in clean.items() if c}

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, vars_, order):
        return cls(vars_, order, {}, _trusted=True)

    @classmethod
    def constant(cls, vars_, order, c=1):
        c = rational(c)
        return cls(vars_, order, {(0, (0,) * len(vars_)): c} if c else {}, _trusted=True)

    one = constant

    @classmethod
    def hbar(cls, vars_, order, power=1):
        if power > order:
            return cls.zero(vars_, order)
        return cls(vars_, order, {(power, (0,) * len(vars_)): mpq(1)}, _trusted=True)

    @classmethod
    def var(cls, vars_, order, name, power=1):
        i = _index(vars_, name)
        e = [0] * len(vars_)
        e[i] = power
        return cls(vars_, order, {(0, tuple(e)): 1})

    @classmethod
    def monomial(cls, vars_, order, exps, c=1, hpow=0):
        return cls(vars_, order, {(hpow, tuple(exps)): c})

    @classmethod
    def from_poly(cls, poly: LaurentPoly, order: int, hpow: int = 0):
        if hpow > order:
            return cls.zero(poly.vars, order)
        return cls(poly.vars, order, {(hpow, e): c for e, c in poly.terms.items()}, _trusted=True)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[LaurentPoly], order: int | None = None):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient")
        order = len(coeffs) - 1 if order is None else order
        vars_ = coeffs[0].vars
        terms = {}
        for k, p in enumerate(coeffs):
            if p.vars != vars_:
                raise VariableError("coefficients over different variables")
            if k > order:
                break
            for e, c in p.terms.items():
                terms[(k, e)] = c
        return cls(vars_, order, terms, _trusted=True)

    # -- access -------------------------------------------------------------
    def coeff(self, k: int) -> LaurentPoly:
        """Coefficient of ``h**k`` as a Laurent polynomial."""
        return LaurentPoly(
            self.vars, {e: c for (j, e), c in self.terms.items() if j == k}, _trusted=True
        )

    @property
    def coeffs(self) -> tuple[LaurentPoly, ...]:
        return tuple(self.coeff(k) for k in range(self.order + 1))

    def sigma0(self) -> LaurentPoly:
        return self.coeff(0)

    def valuation(self) -> int | None:
        """Smallest hbar power with a nonzero coefficient; None for zero."""
        return min((k for k, _ in self.terms), default=None)

    def is_scalar(self) -> bool:
        zero = (0,) * len(self.vars)
        return all(e == zero for _, e in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, HSeries):
            return (
                self.vars == other.vars
                and self.order == other.order
                and self.terms == other.terms
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, self.order, frozenset(self.terms.items())))

    def __repr__(self):
        from .serialize import series_to_text

        return f"HSeries[N={self.order}]({series_to_text(self)})"

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, HSeries):
            _same_vars(self, other)
            return other
        if isinstance(other, LaurentPoly):
            _same_vars(self, other)
            return HSeries.from_poly(other, self.order)
        return HSeries.constant(self.vars, self.order, other)

    def truncate(self, order: int):
        if order >= self.order:
            if order == self.order:
                return self
            return HSeries(self.vars, order, dict(self.terms), _trusted=True)
        return HSeries(
            self.vars, order, {key: c for key, c in self.terms.items() if key[0] <= order},
            _trusted=True,
        )

    def _combine(self, other, sign):
        other = self._coerce(other)
        n = min(self.order, other.order)
        out = {key: c for key, c in self.terms.items() if key[0] <= n}
        for key, c in other.terms.items():
            if key[0] > n:
                continue
            v = out.get(key, 0) + sign * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return HSeries(self.vars, n, out, _trusted=True)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return HSeries(self.vars, self.order, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def scale(self, c):
        c = rational(c)
        if not c:
            return HSeries.zero(self.vars, self.order)
        return HSeries(self.vars, self.order, {k: c * v for k, v in self.terms.items()}, _trusted=True)

    def shift(self, k: int = 1):
        """Multiply by ``h**k`` (k >= 0), dropping what falls past the order."""
        if k < 0:
            raise ValueError("use valuation-aware division for negative shifts")
        n = self.order
        return HSeries(
            self.vars, n, {(j + k, e): c for (j, e), c in self.terms.items() if j + k <= n},
            _trusted=True,
        )

    def __mul__(self, other):
        if not isinstance(other, (HSeries, LaurentPoly)):
            return self.scale(other)
        other = self._coerce(other)
        n = min(self.order, other.order)
        out = {}
        get = out.get
        b_items = sorted(other.terms.items())
        for (j1, e1), c1 in self.terms.items():
            if j1 > n:
                continue
            lim = n - j1
            for (j2, e2), c2 in b_items:
                if j2 > lim:
                    break
                key = (j1 + j2, tuple(i + j for i, j in zip(e1, e2)))
                out[key] = get(key, 0) + c1 * c2
        return HSeries(self.vars, n, {k: c for k, c in out.items() if c}, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = HSeries.constant(self.vars, self.order, 1)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self):
        """Inverse of ``u(h) * x**e`` where ``u`` has a nonzero constant term.

        These are the units of the truncated ring; anything else raises.
        """
        exps = {e for _, e in self.terms}
        if len(exps) != 1 or (0, next(iter(exps))) not in self.terms:
            raise VariableError("series is not a unit (need u(h)*x^e with u(0) != 0)")
        (e,) = exps
        _check_exps(self.vars, tuple(-i for i in e))
        u = [self.terms.get((k, e), mpq(0)) for k in range(self.order + 1)]
        inv = [mpq(1) / u[0]]
        for k in range(1, self.order + 1):
            s = sum((u[j] * inv[k - j] for j in range(1, k + 1)), mpq(0))
            inv.append(-s / u[0])
        ne = tuple(-i for i in e)
        return HSeries(
            self.vars, self.order, {(k, ne): c for k, c in enumerate(inv) if c}, _trusted=True
        )

    # -- calculus -----------------------------------------------------------
    def derive(self, var):
        """Coefficient-wise partial derivative."""
        i = _index(self.vars, var)
        out = {}
        for (k, e), c in self.terms.items():
            p = e[i]
            if p:
                out[(k, e[:i] + (p - 1,) + e[i + 1:])] = c * p
        return HSeries(self.vars, self.order, out, _trusted=True)

    def euler(self, var):
        """``x * d/dx``: scales ``x**p`` by ``p``."""
        i = _index(self.vars, var)
        return HSeries(
            self.vars, self.order,
            {key: c * key[1][i] for key, c in self.terms.items() if key[1][i]},
            _trusted=True,
        )

    def dilate(self, var, direction: int = 1):
        """``exp(direction * h * x d/dx)``: ``x**p -> exp(direction*p*h) x**p``."""
        i = _index(self.vars, var)
        if direction == 0:
            return self
        n = self.order
        out = {}
        for (k, e), c in self.terms.items():
            rate = direction * e[i]
            if rate == 0:
                out[(k, e)] = out.get((k, e), 0) + c
                continue
            for j, w in enumerate(_exp_weights(rate, n - k)):
                key = (k + j, e)
                out[key] = out.get(key, 0) + c * w
        return HSeries(self.vars, n, {k: c for k, c in out.items() if c}, _trusted=True)

    def translate(self, var, direction: int = 1):
        """``f(x) -> f(x + direction*h)`` by binomial expansion.

        Undefined on invertible variables: a shift does not preserve
        Laurent monomials.
        """
        i = _index(self.vars, var)
        if self.vars[i].invertible:
            raise VariableError(f"cannot translate invertible variable {self.vars[i].name}")
        if direction == 0:
            return self
        n = self.order
        out = {}
        for (k, e), c in self.terms.items():
            p = e[i]
            for j in range(0, min(p, n - k) + 1):
                ne = e[:i] + (p - j,) + e[i + 1:]
                key = (k + j, ne)
                out[key] = out.get(key, 0) + c * comb(p, j) * direction ** j
        return HSeries(self.vars, n, {k: c for k, c in out.items() if c}, _trusted=True)

    def with_vars(self, vars_, mapping: Mapping[str, str] | None = None):
        """Re-express over another variable list (see LaurentPoly.with_vars)."""
        out = {}
        for k in range(self.order + 1):
            for e, c in self.coeff(k).with_vars(vars_, mapping).terms.items():
                out[(k, e)] = c
        return HSeries(tuple(vars_), self.order, out, _trusted=True)


@lru_cache(maxsize=4096)
def _exp_weights(rate: int, n: int) -> tuple[mpq, ...]:
    return tuple(mpq(rate) ** j / factorial(j) for j in range(n + 1))


def exp_hbar(c, order: int, vars_=()) -> HSeries:
    """``exp(c*h)`` truncated at ``h**order``, as a scalar series."""
    c = rational(c)
    vars_ = tuple(vars_)
    zero = (0,) * len(vars_)
    return HSeries(
        vars_, order, {(k, zero): c ** k / factorial(k) for k in range(order + 1)}
    )


@lru_cache(maxsize=None)
def stirling(k: int, l: int) -> int:
    """Stirling number of the second kind: partitions of a k-set into l blocks."""
    if k < 0 or l < 0:
        return 0
    if k == 0 and l == 0:
        return 1
    if k == 0 or l == 0:
        return 0
    return l * stirling(k - 1, l) + stirling(k - 1, l - 1)


def _poly_text(vars_, terms) -> str:
    from .serialize import poly_to_text

    return poly_to_text(LaurentPoly(vars_, terms, _trusted=True))
