"""A small arithmetic expression language for initial data and forcings.

Grammar (EBNF):

    expr    := term   (("+" | "-") term)*
    term    := unary  (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom   ["^" unary]            (right-associative)
    atom    := NUMBER | "x" | "t" | NAME "(" expr ("," expr)* ")" | "(" expr ")"

Precedence: ^  >  unary -  >  * /  >  + -.  Known names: sin, cos, exp,
abs, sqrt (unary) and max, min (binary); the only variables are x and t.
Parsing is total: any byte string either parses or raises ParseError with
the byte offset and the expected-token set.  Evaluation follows IEEE
float conventions (division by zero and domain violations yield inf/nan,
which propagate; rejecting them is the config loader's job).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ParseError",
    "Expr",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "parse",
    "evaluate",
    "to_str",
    "FUNCTIONS",
]

FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "abs": 1, "sqrt": 1, "max": 2, "min": 2}
VARIABLES = ("x", "t")


class ParseError(ValueError):
    """Syntax error with byte offset and the set of expected tokens."""

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = tuple(expected)
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Num | Var | Neg | BinOp | Call


_OPS = "+-*/^(),"


def _tokenize(src: str):
    """Yield (kind, text, offset) triples; kinds: num, name, op, end."""
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == ".":
                j += 1
                while j < n and src[j].isdigit():
                    j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    j = k
                    while j < n and src[j].isdigit():
                        j += 1
            tokens.append(("num", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        if ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, off = self.peek()
        if kind == "op" and text == op:
            return self.advance()
        raise ParseError(f"got {text!r}" if text else "unexpected end of input", off, (repr(op),))

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {text!r}", off, ("operator", "end of input"))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                e = BinOp(text, e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                e = BinOp(text, e, self.unary())
            else:
                return e

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return BinOp("^", base, self.unary())  # right-associative
        return base

    def atom(self) -> Expr:
        kind, text, off = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text in VARIABLES:
                return Var(text)
            if text in FUNCTIONS:
                arity = FUNCTIONS[text]
                self.expect_op("(")
                args = [self.expr()]
                while True:
                    k2, t2, o2 = self.peek()
                    if k2 == "op" and t2 == ",":
                        self.advance()
                        args.append(self.expr())
                    else:
                        break
                self.expect_op(")")
                if len(args) != arity:
                    raise ParseError(
                        f"{text} takes {arity} argument(s), got {len(args)}", off
                    )
                return Call(text, tuple(args))
            raise ParseError(
                f"unknown identifier {text!r}", off, ("x", "t", *sorted(FUNCTIONS))
            )
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        what = f"got {text!r}" if text else "unexpected end of input"
        raise ParseError(what, off, ("number", "name", "'('", "'-'"))


def parse(src: str) -> Expr:
    """Parse a source string into an Expr or raise a position-annotated ParseError."""
    return _Parser(src).parse()


def _pow(a: float, b: float) -> float:
    """Real power: repeated multiplication for small integer exponents, exp*log otherwise."""
    if b == int(b) and abs(b) <= 64:
        k = int(abs(b))
        out = 1.0
        for _ in range(k):
            out *= a
        if b < 0:
            if out == 0.0:
                return math.inf if a >= 0 or k % 2 == 0 else -math.inf
            return 1.0 / out
        return out
    if a < 0.0:
        return math.nan
    if a == 0.0:
        return 0.0 if b > 0 else math.inf
    try:
        return math.exp(b * math.log(a))
    except OverflowError:
        return math.inf


def evaluate(e: Expr, x: float, t: float) -> float:
    """Evaluate with IEEE semantics: inf/nan propagate, nothing raises."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return float(x) if e.name == "x" else float(t)
    if isinstance(e, Neg):
        return -evaluate(e.arg, x, t)
    if isinstance(e, BinOp):
        a = evaluate(e.left, x, t)
        b = evaluate(e.right, x, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0.0:
                if a == 0.0 or math.isnan(a):
                    return math.nan
                return math.copysign(math.inf, a) * math.copysign(1.0, b)
            return a / b
        return _pow(a, b)
    a = [evaluate(arg, x, t) for arg in e.args]
    if e.name == "sin":
        return math.sin(a[0]) if math.isfinite(a[0]) else math.nan
    if e.name == "cos":
        return math.cos(a[0]) if math.isfinite(a[0]) else math.nan
    if e.name == "exp":
        try:
            return math.exp(a[0])
        except OverflowError:
            return math.inf
    if e.name == "abs":
        return abs(a[0])
    if e.name == "sqrt":
        return math.sqrt(a[0]) if a[0] >= 0.0 else math.nan
    if e.name == "max":
        return max(a[0], a[1])
    return min(a[0], a[1])


_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _render(e: Expr, parent_level: int, right_of_same=False) -> str:
    if isinstance(e, Num):
        s = repr(e.value)
        return s[:-2] if s.endswith(".0") else s
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({', '.join(_render(a, 0) for a in e.args)})"
    if isinstance(e, Neg):
        inner = _render(e.arg, _LEVEL["neg"])
        s = f"-{inner}"
        return f"({s})" if parent_level > _LEVEL["neg"] else s
    lvl = _LEVEL[e.op]
    if e.op == "^":
        left = _render(e.left, lvl + 1)  # left operand must bind tighter
        right = _render(e.right, _LEVEL["neg"])  # right side admits unary minus
    else:
        left = _render(e.left, lvl)
        right = _render(e.right, lvl + 1)  # - and / are left-associative
    s = f"{left} {e.op} {right}"
    return f"({s})" if parent_level > lvl else s


def to_str(e: Expr) -> str:
    """Pretty-print with minimal parentheses; parse(to_str(e)) reproduces e."""
    return _render(e, 0)
