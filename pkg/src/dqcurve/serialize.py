"""JSON documents and human-readable text for series and operators.

The JSON layout is the stable interchange format; text is for people (and
for the parse/print round trip, which the parser accepts back).
"""

from __future__ import annotations

import json

from gmpy2 import mpq

from .series import HSeries, LaurentPoly, Var, VariableError

__all__ = [
    "DocumentError",
    "dumps",
    "vars_to_doc",
    "vars_from_doc",
    "series_to_doc",
    "series_from_doc",
    "operator_to_doc",
    "operator_from_doc",
    "poly_to_text",
    "series_to_text",
    "operator_to_text",
]


class DocumentError(ValueError):
    """A JSON document that does not follow the schema."""


def dumps(doc) -> str:
    """Canonical compact JSON: fixed key order, no whitespace."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def vars_to_doc(vars_):
    return [{"name": v.name, "invertible": bool(v.invertible)} for v in vars_]


def vars_from_doc(doc):
    try:
        return tuple(Var(str(d["name"]), bool(d["invertible"])) for d in doc)
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed variable list: {exc}") from exc


def _sorted_terms(series: HSeries):
    return sorted(series.terms.items())


def series_to_doc(series: HSeries) -> dict:
    return {
        "truncation": series.order,
        "vars": vars_to_doc(series.vars),
        "terms": [
            {
                "hpow": k,
                "exponents": list(e),
                "num": int(c.numerator),
                "den": int(c.denominator),
            }
            for (k, e), c in _sorted_terms(series)
        ],
    }


def series_from_doc(doc) -> HSeries:
    try:
        vars_ = vars_from_doc(doc["vars"])
        terms = {}
        for t in doc["terms"]:
            key = (int(t["hpow"]), tuple(int(e) for e in t["exponents"]))
            if key in terms:
                raise DocumentError(f"duplicate term {key}")
            terms[key] = mpq(int(t["num"]), int(t["den"]))
        return HSeries(vars_, int(doc["truncation"]), terms)
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise DocumentError(f"malformed series document: {exc}") from exc


def operator_to_doc(op) -> dict:
    alg = op.algebra
    names = alg.generator_names()
    return {
        "algebra": alg.tag_string(),
        "vars": vars_to_doc(alg.vars),
        "terms": [
            {
                "coeff": series_to_doc(c),
                "powers": {names[i]: p for i, p in enumerate(powers) if p},
            }
            for powers, c in sorted(op.terms.items())
        ],
    }


def operator_from_doc(doc, order: int | None = None):
    from .operators import OperatorAlgebra, SkewOperator

    try:
        vars_ = vars_from_doc(doc["vars"])
        terms = doc["terms"]
        if order is None:
            order = int(terms[0]["coeff"]["truncation"]) if terms else 0
        alg = OperatorAlgebra.from_tag_string(doc["algebra"], vars_, order)
        names = alg.generator_names()
        out = {}
        for t in terms:
            powers = tuple(
                int(t["powers"].get(names[i], 0)) if names[i] is not None else 0
                for i in range(len(vars_))
            )
            extra = set(t["powers"]) - {n for n in names if n is not None}
            if extra:
                raise DocumentError(f"unknown generators {sorted(extra)}")
            out[powers] = series_from_doc(t["coeff"]).truncate(order)
        return SkewOperator(alg, out)
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed operator document: {exc}") from exc


# -- text --------------------------------------------------------------------

def _coef_text(c: mpq) -> str:
    c = abs(c)
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"({int(c.numerator)}/{int(c.denominator)})"


def _factor(name, p):
    return name if p == 1 else f"{name}^{p}"


def _monomial_factors(vars_, exps, order=None):
    idx = range(len(vars_))
    if order is not None:
        pos = {v.name: i for i, v in enumerate(vars_)}
        idx = [pos[n] for n in order]
    return [_factor(vars_[i].name, exps[i]) for i in idx if exps[i]]


def _join(pieces) -> str:
    """pieces: list of (sign, body) -> 'a - b + c'."""
    if not pieces:
        return "0"
    out = []
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _term_body(c, factors):
    if abs(c) == 1 and factors:
        return "*".join(factors)
    return "*".join([_coef_text(c)] + factors)


def poly_to_text(poly: LaurentPoly, order=None) -> str:
    pieces = []
    for e, c in sorted(poly.terms.items()):
        pieces.append((c < 0, _term_body(c, _monomial_factors(poly.vars, e, order))))
    return _join(pieces)


def series_to_text(series: HSeries, order=None) -> str:
    """Terms in canonical (hpow, exponent) order.

    ``order`` lists variable names in the order they should be written
    inside a monomial; for a star algebra this must be an ordering in which
    the star product of the factors equals their commutative product.
    """
    pieces = []
    for (k, e), c in _sorted_terms(series):
        factors = ([_factor("h", k)] if k else []) + _monomial_factors(series.vars, e, order)
        pieces.append((c < 0, _term_body(c, factors)))
    return _join(pieces)


def operator_to_text(op) -> str:
    names = op.algebra.generator_names()
    pieces = []
    for powers, c in sorted(op.terms.items()):
        gens = [_factor(names[i], p) for i, p in enumerate(powers) if p]
        if len(c.terms) == 1 or not gens:
            for (k, e), a in sorted(c.terms.items()):
                factors = ([_factor("h", k)] if k else []) + _monomial_factors(c.vars, e)
                pieces.append((a < 0, _term_body(a, factors + gens)))
        else:
            body = "(" + series_to_text(c) + ")"
            pieces.append((False, "*".join([body] + gens)))
    return _join(pieces)


def check_vars(expected, got, what="value") -> None:
    if tuple(expected) != tuple(got):
        raise VariableError(f"{what} has variables {got}, expected {expected}")
