"""Recursive-descent parser for the expression grammar.

One grammar serves the whole surface: vector expressions entered on the
command line, scalar probes, and the round-trip of serialized canonical
tensor expressions.

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' integer)?
    primary := number | 'f1' | 'f2' | 'f3' | 'xi' | 'e<k>' | name
             | 'phi' '(' expr ')' | 'eta' '(' expr ')'
             | 'g' '(' expr ',' expr ')' | '(' expr ')'

Numbers may be integers or decimals; '/' divides by a numeric literal
only, so exact rationals like 3/4 survive.  Any other name is a vector
variable.  Sums must be type-homogeneous, a product may contain at most
one vector factor, and '^' applies to scalars.  Errors carry line:col.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .symbolic import (
    Raw,
    RBasis,
    RDot,
    REta,
    RNum,
    RPhi,
    RScalar,
    RScale,
    RSProd,
    RSSum,
    RSum,
    RSym,
    RVar,
    RXi,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | end
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?|[A-Za-z_][A-Za-z0-9_]*|[-+*/^(),]|\S")


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, line in enumerate(source.splitlines() or [""], start=1):
        for m in _TOKEN_RE.finditer(line):
            text = m.group()
            col = m.start() + 1
            if text[0].isdigit():
                kind = "num"
            elif text[0].isalpha() or text[0] == "_":
                kind = "name"
            elif text in "+-*/^(),":
                kind = "op"
            else:
                raise ParseError(f"unexpected character {text!r}", lineno, col)
            tokens.append(_Token(kind, text, lineno, col))
    last_line = source.count("\n") + 1
    tokens.append(_Token("end", "", last_line, len(source.splitlines()[-1]) + 1
                         if source.splitlines() else 1))
    return tokens


_BASIS_RE = re.compile(r"^e([0-9]+)$")

# a parsed node is ('s', RScalar) or ('v', Raw)
_Node = tuple[str, object]


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.advance()
        raise ParseError(f"expected {text!r}, found {tok.text!r} "
                         f"({'end of input' if tok.kind == 'end' else tok.kind})",
                         tok.line, tok.col)

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    # grammar ---------------------------------------------------------------

    def parse(self) -> _Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input starting at {tok.text!r}",
                             tok.line, tok.col)
        return node

    def expr(self) -> _Node:
        parts = [self.term()]
        signs = [1]
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            signs.append(1 if op == "+" else -1)
            parts.append(self.term())
        if len(parts) == 1:
            return parts[0]
        kinds = {k for k, _ in parts}
        if len(kinds) > 1:
            tok = self.tokens[self.pos - 1]
            raise ParseError("cannot add a scalar and a vector", tok.line, tok.col)
        if kinds == {"s"}:
            out = tuple(node if sign == 1 else RSProd((RNum(Fraction(-1)), node))
                        for sign, (_, node) in zip(signs, parts))
            return ("s", RSSum(out))
        out = tuple(node if sign == 1 else RScale(RNum(Fraction(-1)), node)
                    for sign, (_, node) in zip(signs, parts))
        return ("v", RSum(out))

    def term(self) -> _Node:
        factors = [self.unary()]
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance()
            rhs = self.unary()
            if op.text == "/":
                kind, node = rhs
                if kind != "s" or not isinstance(node, RNum) or node.value == 0:
                    raise ParseError("division is only by a nonzero numeric literal",
                                     op.line, op.col)
                rhs = ("s", RNum(Fraction(1) / node.value))
            factors.append(rhs)
        scalars = [node for kind, node in factors if kind == "s"]
        vectors = [node for kind, node in factors if kind == "v"]
        if len(vectors) > 1:
            tok = self.tokens[self.pos - 1]
            raise ParseError("a product may contain at most one vector factor",
                             tok.line, tok.col)
        if not vectors:
            return ("s", scalars[0] if len(scalars) == 1 else RSProd(tuple(scalars)))
        vec = vectors[0]
        if not scalars:
            return ("v", vec)
        coeff = scalars[0] if len(scalars) == 1 else RSProd(tuple(scalars))
        return ("v", RScale(coeff, vec))

    def unary(self) -> _Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.advance()
            kind, node = self.unary()
            if tok.text == "+":
                return (kind, node)
            if kind == "s":
                return ("s", RSProd((RNum(Fraction(-1)), node)))
            return ("v", RScale(RNum(Fraction(-1)), node))
        return self.power()

    def power(self) -> _Node:
        base = self.primary()
        if self.peek().kind == "op" and self.peek().text == "^":
            op = self.advance()
            exp_tok = self.peek()
            if exp_tok.kind != "num" or "." in exp_tok.text:
                raise ParseError("exponent must be a nonnegative integer",
                                 exp_tok.line, exp_tok.col)
            self.advance()
            exponent = int(exp_tok.text)
            kind, node = base
            if kind != "s":
                raise ParseError("'^' applies to scalars only", op.line, op.col)
            if exponent == 0:
                return ("s", RNum(Fraction(1)))
            return ("s", node if exponent == 1 else RSProd((node,) * exponent))
        return base

    def primary(self) -> _Node:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return ("s", RNum(Fraction(tok.text)))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            self.advance()
            name = tok.text
            if name in ("f1", "f2", "f3"):
                return ("s", RSym(name))
            if name == "xi":
                return ("v", RXi())
            m = _BASIS_RE.match(name)
            if m:
                index = int(m.group(1))
                if index == 0:
                    raise ParseError("basis vectors are numbered from e1",
                                     tok.line, tok.col)
                return ("v", RBasis(index))
            if name == "phi":
                self.expect("(")
                kind, node = self.expr()
                if kind != "v":
                    raise ParseError("phi expects a vector argument", tok.line, tok.col)
                self.expect(")")
                return ("v", RPhi(node))
            if name == "eta":
                self.expect("(")
                kind, node = self.expr()
                if kind != "v":
                    raise ParseError("eta expects a vector argument", tok.line, tok.col)
                self.expect(")")
                return ("s", REta(node))
            if name == "g":
                self.expect("(")
                kind_a, a = self.expr()
                self.expect(",")
                kind_b, b = self.expr()
                self.expect(")")
                if kind_a != "v" or kind_b != "v":
                    raise ParseError("g expects two vector arguments", tok.line, tok.col)
                return ("s", RDot(a, b))
            return ("v", RVar(name))
        raise self.fail(f"unexpected {'end of input' if tok.kind == 'end' else tok.text!r}")


def parse_expr(source: str) -> tuple[str, object]:
    """Parse to ('s', RScalar) or ('v', Raw)."""
    return _Parser(source).parse()


def parse_vector_expr(source: str) -> Raw:
    """Parse a vector-valued expression; a literal scalar 0 counts as zero."""
    kind, node = parse_expr(source)
    if kind == "v":
        return node
    if isinstance(node, RNum) and node.value == 0:
        return RSum(())
    raise ParseError("expected a vector-valued expression", 1, 1)


def parse_scalar_expr(source: str) -> RScalar:
    kind, node = parse_expr(source)
    if kind != "s":
        raise ParseError("expected a scalar-valued expression", 1, 1)
    return node
