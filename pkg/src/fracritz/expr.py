"""Density expressions rho(x): a small recursive-descent parser and evaluator.

Grammar (precedence high to low)::

    atom    := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
    power   := atom ('^' unary)?          # right associative
    unary   := '-' unary | power
    term    := unary (('*' | '/') unary)*
    expr    := term (('+' | '-') term)*

so ``-2^2`` is ``-(2^2)`` and ``2^3^2`` is ``2^(3^2)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt")
BINARY_OPS = ("+", "-", "*", "/", "^")

ArrayOrFloat = Union[float, np.ndarray]


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class DomainError(ExprError):
    def __init__(self, message: str, x):
        super().__init__(f"{message} at x={x!r}")
        self.x = x


class NonPositiveDensityError(ExprError):
    def __init__(self, x: float, value: float):
        super().__init__(f"density is not strictly positive: rho({x!r}) = {value!r}")
        self.x = x
        self.value = value


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ExprAst"
    right: "ExprAst"

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"bad binary operator {self.op!r}")


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExprAst"

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"bad function {self.func!r}")


ExprAst = Union[Const, Var, Neg, BinOp, Call]


# --------------------------------------------------------------------------
# Lexer / parser
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    pos = 0
    tokens = []
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, value, pos = self.peek()
        if value != text or kind == "end":
            if kind == "end":
                raise ExprSyntaxError(f"expected {text!r} but input ended", pos)
            raise ExprSyntaxError(f"expected {text!r}, found {value!r}", pos)
        self.advance()

    def expr(self) -> ExprAst:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> ExprAst:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> ExprAst:
        kind, value, pos = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(value))
        if kind == "name":
            self.advance()
            if value == "x":
                return Var()
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            raise UnknownIdentifierError(value, pos)
        if value == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ExprSyntaxError("unexpected end of input", pos)
        raise ExprSyntaxError(f"unexpected token {value!r}", pos)


def parse(source: str) -> ExprAst:
    """Parse ``source`` into an AST; errors carry the character offset."""
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    p = _Parser(source)
    node = p.expr()
    kind, value, pos = p.peek()
    if kind != "end":
        if value == ")":
            raise ExprSyntaxError("unmatched ')'", pos)
        raise ExprSyntaxError(f"unexpected token {value!r}", pos)
    return node


def to_source(node: ExprAst) -> str:
    """Fully parenthesized text that parses back to an equivalent tree."""
    if isinstance(node, Const):
        text = repr(float(node.value))
        return f"(-{text[1:]})" if text.startswith("-") else text
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)}{node.op}{to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _offending(x, mask):
    if np.ndim(x) == 0:
        return float(x)
    return float(np.broadcast_to(x, np.shape(mask))[mask][0])


def _eval(node: ExprAst, x):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, Call):
        v = _eval(node.arg, x)
        if node.func == "ln":
            bad = np.asarray(v) <= 0
            if np.any(bad):
                raise DomainError("ln of non-positive argument", _offending(x, bad))
            return np.log(v)
        if node.func == "sqrt":
            bad = np.asarray(v) < 0
            if np.any(bad):
                raise DomainError("sqrt of negative argument", _offending(x, bad))
            return np.sqrt(v)
        return {"exp": np.exp, "sin": np.sin, "cos": np.cos}[node.func](v)

    left = _eval(node.left, x)
    right = _eval(node.right, x)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        bad = np.asarray(right) == 0
        if np.any(bad):
            raise DomainError("division by zero", _offending(x, bad))
        return left / right
    # power
    out = np.power(np.asarray(left, dtype=float), right)
    bad = np.isnan(out) & ~np.isnan(np.asarray(left, dtype=float))
    if np.any(bad):
        raise DomainError("negative base raised to a non-integer power", _offending(x, bad))
    return out


def evaluate(node: ExprAst, x: ArrayOrFloat) -> ArrayOrFloat:
    """Value of ``node`` at ``x`` (a float or an array of points)."""
    with np.errstate(all="ignore"):
        if np.ndim(x) == 0:
            return float(_eval(node, float(x)))
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(_eval(node, x), dtype=float), x.shape).copy()


# --------------------------------------------------------------------------
# Densities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DensitySpec:
    ast: ExprAst
    source: str
    a: float
    b: float

    def __call__(self, x: ArrayOrFloat) -> ArrayOrFloat:
        return evaluate(self.ast, x)


def validate_density(ast: ExprAst, a: float, b: float, grid_n: int = 1001,
                     source: str | None = None) -> DensitySpec:
    """Accept ``ast`` as a density on [a, b] if it is finite and > 0 on an equispaced grid."""
    if not b > a:
        raise ValueError(f"need b > a, got a={a}, b={b}")
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    grid = np.linspace(a, b, grid_n)
    grid[-1] = b
    values = evaluate(ast, grid)
    bad = ~np.isfinite(values) | (values <= 0)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NonPositiveDensityError(float(grid[i]), float(values[i]))
    return DensitySpec(ast, source if source is not None else to_source(ast), float(a), float(b))


# ast literals, no parsing involved
_PRESETS = {
    "euler": (BinOp("/", Const(1.0), BinOp("^", Var(), Const(2.0))), "1/x^2", 1.0, math.e),
    "unit": (Const(1.0), "1", 0.0, math.pi),
}


def preset(name: str) -> DensitySpec:
    """The two built-in densities: ``euler`` (1/x^2 on [1, e]) and ``unit`` (1 on [0, pi])."""
    try:
        ast, source, a, b = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown density preset {name!r}; choose from {sorted(_PRESETS)}") from None
    return DensitySpec(ast, source, a, b)


def resolve_density(rho: str, a: float | None = None, b: float | None = None,
                    grid_n: int = 1001) -> DensitySpec:
    """Turn a preset name or an expression into a validated density.

    Presets carry their own interval; explicit ``a``/``b`` override it.
    """
    if rho in _PRESETS:
        spec = preset(rho)
        if a is None and b is None:
            return spec
        a = spec.a if a is None else a
        b = spec.b if b is None else b
        return validate_density(spec.ast, a, b, grid_n, source=spec.source)
    if a is None or b is None:
        raise ValueError("an explicit interval [a, b] is required for a density expression")
    return validate_density(parse(rho), a, b, grid_n, source=rho)
