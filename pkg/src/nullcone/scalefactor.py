"""Scale factors a(t): expression parsing, presets, and exact derivatives.

Grammar (whitespace-insensitive, ``^`` right-associative and binding
tighter than unary minus, which binds tighter than ``*``/``/``)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 't' | NAME '(' expr ')' | '(' expr ')'

Evaluation is generic over the scalar type, so the same AST runs on plain
floats and on HyperDuals; ``eval_a`` seeds a single direction and returns
(a, a', a'') exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import numeric
from .errors import ParseError, UnknownFunctionError
from .numeric import HyperDual

__all__ = [
    "ScaleExpr", "Lit", "Var", "Neg", "Bin", "Fun",
    "parse_scale_factor", "print_scale_factor", "eval_scale", "eval_a",
    "PRESETS", "Preset", "resolve_scale",
]

FUNCTIONS = {
    "sin": numeric.sin, "cos": numeric.cos, "tan": numeric.tan,
    "sinh": numeric.sinh, "cosh": numeric.cosh, "tanh": numeric.tanh,
    "exp": numeric.exp, "ln": numeric.log, "sqrt": numeric.sqrt,
    "csc": numeric.csc, "csch": numeric.csch, "sech": numeric.sech,
    "cot": numeric.cot, "coth": numeric.coth,
}


@dataclass(frozen=True)
class Lit:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "ScaleExpr"


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: "ScaleExpr"
    right: "ScaleExpr"


@dataclass(frozen=True)
class Fun:
    name: str
    arg: "ScaleExpr"


ScaleExpr = Union[Lit, Var, Neg, Bin, Fun]


class _Tokenizer:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.src):
            return ("end", "", self.pos)
        c = self.src[self.pos]
        if c in "+-*/^()":
            return ("op", c, self.pos)
        if c.isdigit() or c == ".":
            j = self.pos
            seen_exp = False
            while j < len(self.src):
                ch = self.src[j]
                if ch.isdigit() or ch == ".":
                    j += 1
                elif ch in "eE" and not seen_exp and j + 1 < len(self.src) and (
                    self.src[j + 1].isdigit() or self.src[j + 1] in "+-"
                ):
                    seen_exp = True
                    j += 2 if self.src[j + 1] in "+-" else 1
                else:
                    break
            return ("num", self.src[self.pos:j], self.pos)
        if c.isalpha() or c == "_":
            j = self.pos
            while j < len(self.src) and (self.src[j].isalnum() or self.src[j] == "_"):
                j += 1
            return ("name", self.src[self.pos:j], self.pos)
        raise ParseError(f"unexpected character {c!r}", self.pos)

    def take(self):
        tok = self.peek()
        self.pos = tok[2] + len(tok[1])
        return tok


def parse_scale_factor(src: str) -> ScaleExpr:
    """Parse an a(t) expression; raises ParseError with a byte offset."""
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    tz = _Tokenizer(src)
    expr = _parse_expr(tz)
    kind, text, off = tz.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {text!r}", off)
    return expr


def _parse_expr(tz: _Tokenizer) -> ScaleExpr:
    node = _parse_term(tz)
    while True:
        kind, text, _ = tz.peek()
        if kind == "op" and text in "+-":
            tz.take()
            node = Bin(text, node, _parse_term(tz))
        else:
            return node


def _parse_term(tz: _Tokenizer) -> ScaleExpr:
    node = _parse_factor(tz)
    while True:
        kind, text, _ = tz.peek()
        if kind == "op" and text in "*/":
            tz.take()
            node = Bin(text, node, _parse_factor(tz))
        else:
            return node


def _parse_factor(tz: _Tokenizer) -> ScaleExpr:
    kind, text, _ = tz.peek()
    if kind == "op" and text == "-":
        tz.take()
        return Neg(_parse_factor(tz))
    return _parse_power(tz)


def _parse_power(tz: _Tokenizer) -> ScaleExpr:
    base = _parse_atom(tz)
    kind, text, _ = tz.peek()
    if kind == "op" and text == "^":
        tz.take()
        return Bin("^", base, _parse_factor(tz))
    return base


def _parse_atom(tz: _Tokenizer) -> ScaleExpr:
    kind, text, off = tz.take()
    if kind == "num":
        try:
            return Lit(float(text))
        except ValueError:
            raise ParseError(f"bad number literal {text!r}", off) from None
    if kind == "name":
        if text == "t":
            return Var()
        nkind, ntext, noff = tz.peek()
        if nkind == "op" and ntext == "(":
            if text not in FUNCTIONS:
                raise UnknownFunctionError(text, off)
            tz.take()
            arg = _parse_expr(tz)
            ckind, ctext, coff = tz.take()
            if not (ckind == "op" and ctext == ")"):
                raise ParseError("expected ')'", coff)
            return Fun(text, arg)
        raise ParseError(f"unknown symbol {text!r} (only 't' is a variable)", off)
    if kind == "op" and text == "(":
        node = _parse_expr(tz)
        ckind, ctext, coff = tz.take()
        if not (ckind == "op" and ctext == ")"):
            raise ParseError("expected ')'", coff)
        return node
    raise ParseError(f"expected a value, got {text!r}" if text else "unexpected end of input", off)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def print_scale_factor(expr: ScaleExpr) -> str:
    """Render the AST back to source; parse(print(e)) evaluates identically."""
    return _print(expr, 0)


def _print(e: ScaleExpr, parent_prec: int) -> str:
    if isinstance(e, Lit):
        s = repr(e.value)
        return s[:-2] if s.endswith(".0") else s
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Fun):
        return f"{e.name}({_print(e.arg, 0)})"
    if isinstance(e, Neg):
        inner = _print(e.arg, _PREC["neg"])
        s = f"-{inner}"
        return f"({s})" if parent_prec > _PREC["neg"] else s
    assert isinstance(e, Bin)
    p = _PREC[e.op]
    left = _print(e.left, p if e.op != "^" else p + 1)
    right = _print(e.right, p + 1 if e.op in "+-*/" else p)
    s = f"{left}{e.op}{right}" if e.op == "^" else f"{left} {e.op} {right}"
    return f"({s})" if p < parent_prec else s


def eval_scale(expr: ScaleExpr, t):
    """Evaluate a(t) for a generic scalar t (float or HyperDual)."""
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Var):
        return t
    if isinstance(expr, Neg):
        return -eval_scale(expr.arg, t)
    if isinstance(expr, Fun):
        return FUNCTIONS[expr.name](eval_scale(expr.arg, t))
    l = eval_scale(expr.left, t)
    r = eval_scale(expr.right, t)
    if expr.op == "+":
        return l + r
    if expr.op == "-":
        return l - r
    if expr.op == "*":
        return l * r
    if expr.op == "/":
        if isinstance(r, HyperDual):
            return l * r._reciprocal() if isinstance(l, HyperDual) else r._reciprocal() * l
        from .errors import DomainError
        if r == 0.0:
            raise DomainError("division by zero in scale factor")
        return l / r
    if expr.op == "^":
        if isinstance(l, HyperDual):
            return l ** r
        if isinstance(r, HyperDual):
            return l ** r  # delegated to HyperDual.__rpow__
        if l < 0 and r != int(r):
            from .errors import DomainError
            raise DomainError("non-integer power of a negative value")
        return l ** r
    raise AssertionError(expr.op)


def eval_a(expr: ScaleExpr, t: float):
    """(a, a', a'') at conformal time t, via a single-direction HyperDual."""
    td = HyperDual.variable(float(t), 0, 1)
    r = eval_scale(expr, td)
    if not isinstance(r, HyperDual):
        return float(r), 0.0, 0.0
    return r.v, float(r.g[0]), float(r.h[0, 0])


@dataclass(frozen=True)
class Preset:
    name: str
    source: str
    k_compatible: tuple
    t_domain: tuple  # sampling interval on which the preset is positive
    expr: ScaleExpr


def _mk(name, source, k_compatible, t_domain):
    return Preset(name, source, k_compatible, t_domain, parse_scale_factor(source))


# Conformal-time scale factors; H is fixed to 1 so all curvatures are in
# units of H^2.  The t_domain is the interval random samplers draw from.
PRESETS = {
    p.name: p
    for p in [
        _mk("einstein", "1", (-1, 0, 1), (0.3, 1.8)),
        _mk("ds_km1", "csch(t)", (-1,), (0.25, 2.0)),
        _mk("ds_k0", "1/t", (0,), (0.3, 2.0)),
        _mk("ds_kp1", "csc(t)", (1,), (0.3, 1.25)),
        _mk("ads_km1", "sech(t)", (-1,), (-1.0, 1.5)),
        _mk("mink_km1", "exp(-t)", (-1,), (-1.0, 1.5)),
        _mk("matter_k0", "t^2", (0,), (0.3, 2.0)),
        _mk("radiation_k0", "t", (0,), (0.3, 2.0)),
    ]
}


def resolve_scale(spec: str) -> ScaleExpr:
    """Interpret a string as a preset name or else parse it as an expression."""
    if spec in PRESETS:
        return PRESETS[spec].expr
    return parse_scale_factor(spec)
