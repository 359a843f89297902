"""Expression language for series and operator words.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' ['-'] int)?
    atom   := int ['/' int] | symbol | '(' expr ')'

The context decides what symbols exist and what ``*`` means: the star
product in a series context, composition in an operator context.  Errors
carry the byte offset of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from gmpy2 import mpq

from .operators import INVERTIBLE_GENS, OperatorAlgebra, SkewOperator, as_rees, op_compose
from .series import HSeries, LaurentPoly
from .star import StarAlgebra, star_mul

__all__ = [
    "ParseError",
    "Num",
    "Sym",
    "Neg",
    "BinOp",
    "Pow",
    "SeriesContext",
    "OperatorContext",
    "parse_expr",
    "evaluate",
    "parse_series",
    "parse_operator",
    "parse_poly",
]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.message = message
        self.offset = offset


class Num(NamedTuple):
    value: mpq
    pos: int


class Sym(NamedTuple):
    name: str
    pos: int


class Neg(NamedTuple):
    arg: "Node"
    pos: int


class BinOp(NamedTuple):
    op: str
    left: "Node"
    right: "Node"
    pos: int


class Pow(NamedTuple):
    base: "Node"
    exp: int
    pos: int


Node = Union[Num, Sym, Neg, BinOp, Pow]


# -- contexts ------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesContext:
    """Series over ``vars``; ``*`` is ``algebra``'s star product (commutative if None)."""

    vars: tuple
    order: int
    algebra: StarAlgebra | None = None

    @classmethod
    def star(cls, alg: StarAlgebra, order: int):
        return cls(alg.vars, order, alg)

    def symbols(self) -> dict:
        out = {v.name: v.invertible for v in self.vars}
        out["h"] = False
        return out


@dataclass(frozen=True)
class OperatorContext:
    algebra: OperatorAlgebra

    def symbols(self) -> dict:
        alg = self.algebra
        out = {v.name: v.invertible for v in alg.vars}
        out["h"] = False
        for g in alg.generator_names():
            if g is None:
                continue
            inv = g[0] in INVERTIBLE_GENS and not alg.plus
            out[g] = inv
            if inv:
                out[g + "inv"] = True
        return out


# -- lexer ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/()]))")


class _Tok(NamedTuple):
    kind: str
    text: str
    pos: int  # byte offset


def _tokens(text: str):
    out = []
    i = 0
    while text[i:].strip():
        m = _TOKEN.match(text, i)
        if not m:
            start = len(text) - len(text[i:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", len(text[:start].encode()))
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), len(text[: m.start(kind)].encode())))
        i = m.end()
    out.append(_Tok("end", "", len(text.encode())))
    return out


class _Parser:
    def __init__(self, text, symbols):
        self.toks = _tokens(text)
        self.i = 0
        self.symbols = symbols

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.take()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def parse(self):
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0)
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            t = self.take()
            node = BinOp(t.text, node, self.term(), t.pos)
        return node

    def term(self):
        node = self.factor()
        while self.peek().text == "*":
            t = self.take()
            node = BinOp("*", node, self.factor(), t.pos)
        return node

    def factor(self):
        t = self.peek()
        if t.text == "-":
            self.take()
            return Neg(self.factor(), t.pos)
        node = self.atom()
        if self.peek().text == "^":
            caret = self.take()
            sign = 1
            if self.peek().text == "-":
                self.take()
                sign = -1
            e = self.take()
            if e.kind != "int":
                raise ParseError("exponent must be an integer literal", e.pos)
            if self.peek().text == "/":
                raise ParseError("exponent must be an integer literal", self.peek().pos)
            k = sign * int(e.text)
            if k < 0:
                self._check_negative(node, caret.pos)
            node = Pow(node, k, caret.pos)
        return node

    def _check_negative(self, node, pos):
        if isinstance(node, Num):
            if not node.value:
                raise ParseError("negative power of zero", pos)
            return
        if isinstance(node, Sym) and self.symbols.get(node.name):
            return
        what = f"non-invertible {node.name}" if isinstance(node, Sym) else "a compound expression"
        raise ParseError(f"negative power of {what}", pos)

    def atom(self):
        t = self.take()
        if t.kind == "int":
            value = mpq(int(t.text))
            if self.peek().text == "/":
                self.take()
                d = self.take()
                if d.kind != "int":
                    raise ParseError("expected an integer denominator", d.pos)
                if int(d.text) == 0:
                    raise ParseError("zero denominator", d.pos)
                value = value / int(d.text)
            return Num(value, t.pos)
        if t.kind == "name":
            if t.text not in self.symbols:
                known = ", ".join(sorted(self.symbols))
                raise ParseError(f"unknown symbol {t.text!r} (known: {known})", t.pos)
            return Sym(t.text, t.pos)
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse_expr(text: str, context) -> Node:
    """Parse ``text`` into an AST, checking symbols against ``context``."""
    return _Parser(text, context.symbols()).parse()


# -- evaluation ----------------------------------------------------------------

def _eval_series(node, ctx: SeriesContext) -> HSeries:
    vars_, n = ctx.vars, ctx.order
    if isinstance(node, Num):
        return HSeries.constant(vars_, n, node.value)
    if isinstance(node, Sym):
        if node.name == "h":
            return HSeries.hbar(vars_, n)
        return HSeries.var(vars_, n, node.name)
    if isinstance(node, Neg):
        return -_eval_series(node.arg, ctx)
    if isinstance(node, Pow):
        base = node.base
        if isinstance(base, Num):
            return HSeries.constant(vars_, n, base.value ** node.exp)
        if isinstance(base, Sym) and base.name != "h":
            # a single coordinate star-commutes with itself
            return HSeries.var(vars_, n, base.name, node.exp)
        value = _eval_series(base, ctx)
        out = HSeries.constant(vars_, n, 1)
        for _ in range(node.exp):
            out = _mul_series(out, value, ctx)
        return out
    left, right = _eval_series(node.left, ctx), _eval_series(node.right, ctx)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return _mul_series(left, right, ctx)


def _mul_series(a, b, ctx):
    if ctx.algebra is None:
        return a * b
    return star_mul(ctx.algebra, a, b)


def _eval_operator(node, ctx: OperatorContext) -> SkewOperator:
    alg = ctx.algebra
    if isinstance(node, Num):
        return alg.coeff(node.value)
    if isinstance(node, Sym):
        name = node.name
        if name == "h":
            return alg.hbar()
        if any(v.name == name for v in alg.vars):
            return alg.var(name)
        if name.endswith("inv"):
            return alg.gen(name[:-3], -1)
        return alg.gen(name)
    if isinstance(node, Neg):
        return -_eval_operator(node.arg, ctx)
    if isinstance(node, Pow):
        if isinstance(node.base, Num):
            return alg.coeff(node.base.value ** node.exp)
        return _eval_operator(node.base, ctx) ** node.exp
    left, right = _eval_operator(node.left, ctx), _eval_operator(node.right, ctx)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return op_compose(left, right)


def evaluate(node: Node, context):
    if isinstance(context, OperatorContext):
        alg = context.algebra
        if alg.tag == "rees":
            # a bare D is not a Rees element, so build in the Weyl algebra first
            weyl = OperatorContext(OperatorAlgebra.weyl(len(alg.vars), alg.order))
            return as_rees(_eval_operator(node, weyl))
        return _eval_operator(node, context)
    return _eval_series(node, context)


def parse_series(text: str, context: SeriesContext) -> HSeries:
    return evaluate(parse_expr(text, context), context)


def parse_operator(text: str, algebra: OperatorAlgebra) -> SkewOperator:
    ctx = OperatorContext(algebra)
    return evaluate(parse_expr(text, ctx), ctx)


def parse_poly(text: str, vars_) -> LaurentPoly:
    """A Laurent polynomial (no ``h``) over ``vars_`` with commutative ``*``."""
    ctx = SeriesContext(tuple(vars_), 0)
    node = parse_expr(text, ctx)
    stack = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, Sym) and item.name == "h":
            raise ParseError("h is not allowed in a polynomial", item.pos)
        stack.extend(x for x in item if isinstance(x, tuple))
    return evaluate(node, ctx).sigma0()
