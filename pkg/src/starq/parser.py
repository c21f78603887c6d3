"""Expression grammar shared by CLI input and canonical output.

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := atom ('^' ['-'] INT)?      negative exponents on lam only
    atom    := NUMBER | 'i' | 'lam' | variable | 'gauss' '(' NUMBER ')'
             | 'conj' '(' expr ')' | 'exp_star' '(' expr ',' NUMBER ')'
             | 'comp' '(' INT ',' expr ')' | '(' expr ')'

NUMBER lexes an integer, an adjacent integer fraction `3/2`, and an
adjacent trailing `i` (`1/2i` is the imaginary rational i/2); spaced `/`
stays an operator and divides by scalars.  Variables are q1.., p1..,
z1.., zbar1.. as supplied by the chart.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .coeffs import Chart, GaussPoly, MultiObservable
from .scalars import Scalar
from .series import LambdaSeries
from .star import StarAlgebra


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: str = ""):
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(f"{message} at {line}:{col}"
                         + (f" (expected {expected})" if expected else ""))


TOKEN_RE = re.compile(r"""
    (?P<num>\d+(?:/\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
  | (?P<ws>\s+)
  | (?P<bad>.)
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    for m in TOKEN_RE.finditer(text):
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ws":
            for ch in chunk:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {chunk!r}", line, col)
        tokens.append(Token(kind, chunk, line, col))
        col += len(chunk)
    tokens.append(Token("eof", "", line, col))
    return tokens


# AST nodes: ("num", Scalar) ("var", name) ("lam",) ("gauss", Fraction)
# ("conj", e) ("expstar", e, Fraction) ("comp", k, e)
# ("+"|"-"|"*"|"/", a, b) ("^", e, int) ("neg", e)
Ast = tuple


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"unexpected {t.text!r}", t.line, t.col, text)
        return t

    def parse(self) -> Ast:
        e = self.expr()
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
        return e

    def expr(self) -> Ast:
        t = self.peek()
        if t.text == "-":
            self.next()
            node: Ast = ("neg", self.term())
        else:
            if t.text == "+":
                self.next()
            node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            node = (op, node, self.term())
        return node

    def term(self) -> Ast:
        node = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            node = (op, node, self.factor())
        return node

    def factor(self) -> Ast:
        node = self.atom()
        if self.peek().text == "^":
            self.next()
            sign = 1
            t = self.peek()
            if t.text == "-":
                self.next()
                sign = -1
            t = self.next()
            if t.kind == "num" and "/" in t.text:
                # the eager rational lexer grabbed `2/...`; the exponent is
                # the integer part and the rest stays in the stream
                head, rest = t.text.split("/", 1)
                t = Token("num", head, t.line, t.col)
                self.tokens[self.pos:self.pos] = [
                    Token("op", "/", t.line, t.col + len(head)),
                    Token("num", rest, t.line, t.col + len(head) + 1)]
            if t.kind != "num" or not t.text.isdigit():
                raise ParseError("exponent must be an integer",
                                 t.line, t.col, "integer")
            k = sign * int(t.text)
            if k < 0 and node != ("lam",):
                raise ParseError("negative exponent is allowed on lam only",
                                 t.line, t.col)
            node = ("^", node, k)
        return node

    def _number(self, t: Token) -> Ast:
        text = t.text
        imag = text.endswith("i")
        if imag:
            text = text[:-1] or "1"
        val = Fraction(text)
        return ("num", Scalar(0, val) if imag else Scalar(val))

    def atom(self) -> Ast:
        t = self.next()
        if t.kind == "num":
            return self._number(t)
        if t.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name":
            name = t.text
            if name == "i":
                return ("num", Scalar(0, 1))
            if name == "lam":
                return ("lam",)
            if name == "gauss":
                self.expect("(")
                num = self.next()
                if num.kind != "num":
                    raise ParseError("gauss needs a rational weight",
                                     num.line, num.col, "number")
                if num.text.endswith("i"):
                    raise ParseError("gauss weight must be real",
                                     num.line, num.col)
                self.expect(")")
                return ("gauss", Fraction(num.text))
            if name == "conj":
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return ("conj", e)
            if name == "exp_star":
                self.expect("(")
                e = self.expr()
                self.expect(",")
                num = self.next()
                sign = 1
                if num.text == "-":
                    sign = -1
                    num = self.next()
                if num.kind != "num" or num.text.endswith("i"):
                    raise ParseError("exp_star needs a rational parameter",
                                     num.line, num.col, "number")
                self.expect(")")
                return ("expstar", e, sign * Fraction(num.text))
            if name == "comp":
                self.expect("(")
                num = self.next()
                if num.kind != "num" or not num.text.isdigit():
                    raise ParseError("comp needs a component index",
                                     num.line, num.col, "integer")
                self.expect(",")
                e = self.expr()
                self.expect(")")
                return ("comp", int(num.text), e)
            return ("var", name)
        raise ParseError(f"unexpected {t.text!r}", t.line, t.col, "expression")


def parse(text: str) -> Ast:
    return Parser(text).parse()


# ---------------------------------------------------------------------------
# evaluation into lambda-scalars and observables
# ---------------------------------------------------------------------------

Value_ = Union[LambdaSeries, MultiObservable]


class EvalError(ValueError):
    pass


def _to_obs(v: Value_, algebra: StarAlgebra) -> MultiObservable:
    if isinstance(v, MultiObservable):
        return v
    return algebra.one().scale_lambda(v)


def _mul(a: Value_, b: Value_, algebra: StarAlgebra) -> Value_:
    """Pointwise product; star products belong to commands, not the grammar."""
    if isinstance(a, LambdaSeries) and isinstance(b, LambdaSeries):
        return a * b
    if isinstance(a, LambdaSeries):
        return b.scale_lambda(a)  # type: ignore[union-attr]
    if isinstance(b, LambdaSeries):
        return a.scale_lambda(b)
    return a.pointwise_mul(b)


def evaluate(ast: Ast, algebra: StarAlgebra) -> Value_:
    """Evaluate a parse tree in the given algebra.

    Scalars stay lambda-scalar series as long as possible; any mixing with
    a chart variable promotes to an observable and products become star
    products.
    """
    trunc = algebra.trunc
    kind = ast[0]
    if kind == "num":
        return LambdaSeries({0: ast[1]}, trunc)
    if kind == "lam":
        return LambdaSeries({1: Scalar(1)}, trunc)
    if kind == "var":
        name = ast[1]
        if name not in algebra.chart.variables:
            raise EvalError(f"unknown variable {name!r} on this chart")
        return algebra.coordinate(name)
    if kind == "gauss":
        g = GaussPoly.const(algebra.chart.variables, 1, ast[1],
                            wick_pairs=(algebra.chart.kind == "wick"))
        return algebra.embed(g)
    if kind == "neg":
        v = evaluate(ast[1], algebra)
        if isinstance(v, LambdaSeries):
            return -v
        return -v
    if kind == "conj":
        return evaluate(ast[1], algebra).conj()
    if kind == "comp":
        k = ast[1]
        if not 1 <= k <= algebra.chart.components:
            raise EvalError(f"component {k} out of range")
        v = _to_obs(evaluate(ast[2], algebra), algebra)
        return v.restrict({k - 1})
    if kind == "expstar":
        H = _to_obs(evaluate(ast[1], algebra), algebra)
        return algebra.star_exp(H, ast[2])
    if kind in ("+", "-"):
        a = evaluate(ast[1], algebra)
        b = evaluate(ast[2], algebra)
        if isinstance(a, MultiObservable) or isinstance(b, MultiObservable):
            a = _to_obs(a, algebra)
            b = _to_obs(b, algebra)
        return a + b if kind == "+" else a - b
    if kind == "*":
        return _mul(evaluate(ast[1], algebra), evaluate(ast[2], algebra),
                    algebra)
    if kind == "/":
        a = evaluate(ast[1], algebra)
        b = evaluate(ast[2], algebra)
        if not isinstance(b, LambdaSeries):
            raise EvalError("division is defined by scalars only")
        terms = list(b.coeffs.items())
        if len(terms) != 1 or terms[0][0] != 0:
            raise EvalError("division is defined by plain nonzero scalars")
        inv = LambdaSeries({0: Scalar(1) / terms[0][1]}, trunc)
        return _mul(a, inv, algebra)
    if kind == "^":
        base = evaluate(ast[1], algebra)
        k = ast[2]
        if k < 0:
            out_neg: Value_ = LambdaSeries({k: Scalar(1)}, trunc)
            return out_neg
        if isinstance(base, LambdaSeries):
            out = LambdaSeries({0: Scalar(1)}, trunc)
            for _ in range(k):
                out = out * base
            return out
        out_o = algebra.one()
        for _ in range(k):
            out_o = out_o.pointwise_mul(base)
        return out_o
    raise EvalError(f"cannot evaluate node {kind!r}")


def parse_observable(text: str, algebra: StarAlgebra) -> MultiObservable:
    return _to_obs(evaluate(parse(text), algebra), algebra)


def parse_lambda_scalar(text: str, trunc: int) -> LambdaSeries:
    """Parse a pure lambda-scalar (no chart variables)."""
    from .coeffs import moyal_plane
    alg = StarAlgebra(moyal_plane(1), "moyal", trunc)
    v = evaluate(parse(text), alg)
    if not isinstance(v, LambdaSeries):
        raise EvalError("expected a scalar expression")
    return v
