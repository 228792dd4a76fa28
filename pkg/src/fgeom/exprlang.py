"""A small real-valued expression language for scenario files.

Grammar (EBNF):

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;
    atom    = NUMBER | NAME "(" expr ")" | NAME | "(" expr ")" ;

"^" binds tighter than unary minus and is right associative; "+", "-", "*",
"/" are left associative.  NAME is either one of the functions sin, cos, exp,
log, sqrt or a chart coordinate.  Whitespace is insignificant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EvalDomainError, ExprSyntaxError
from .numcore import Jet, jet_cos, jet_exp, jet_log, jet_sin, jet_sqrt

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "parse",
    "to_source",
    "free_vars",
    "eval_value",
    "eval_jet",
    "ExprMap",
]


class Expr:
    """Base class for expression tree nodes."""

    __slots__ = ()

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str  # sin cos exp log sqrt
    arg: Expr


FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


# --------------------------------------------------------------------------
# Tokenizer
# --------------------------------------------------------------------------

_OPERATORS = "+-*/^()"


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "name" | "op" | "end"
    text: str
    line: int
    column: int


def _tokenize(source):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch in _OPERATORS:
            tokens.append(_Token("op", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (source[j].isdigit() or source[j] == "."):
                j += 1
            # scientific notation: 1e-3, 2.5E+4
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            try:
                float(text)
            except ValueError:
                raise ExprSyntaxError(
                    f"malformed number {text!r}", line, col, expected=("number",)
                )
            tokens.append(_Token("number", text, line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("name", source[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ExprSyntaxError(
            f"unexpected character {ch!r}", line, col, expected=("token",)
        )
    tokens.append(_Token("end", "", line, col))
    return tokens


# --------------------------------------------------------------------------
# Recursive-descent parser
# --------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, text):
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.advance()
        self.fail(tok, expected=(text,))

    def fail(self, tok, expected):
        shown = tok.text if tok.kind != "end" else "end of input"
        raise ExprSyntaxError(
            f"unexpected {shown!r}", tok.line, tok.column, expected=expected
        )

    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            return BinOp("^", base, self.parse_unary())
        return base

    def parse_atom(self):
        tok = self.advance()
        if tok.kind == "number":
            return Const(float(tok.text))
        if tok.kind == "name":
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "(":
                if tok.text not in FUNCTIONS:
                    raise ExprSyntaxError(
                        f"unknown function {tok.text!r}",
                        tok.line,
                        tok.column,
                        expected=FUNCTIONS,
                    )
                self.advance()
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        self.fail(tok, expected=("number", "name", "("))


def parse(source):
    """Parse expression source text into an Expr tree."""
    parser = _Parser(_tokenize(source))
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "end":
        parser.fail(tok, expected=("operator", "end of input"))
    return node


# --------------------------------------------------------------------------
# Pretty printer (round-trips through parse to an identical tree)
# --------------------------------------------------------------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_source(expr):
    return _print(expr, 0)


def _print(expr, parent_prec):
    if isinstance(expr, Const):
        text = repr(expr.value)
        if text.endswith(".0"):
            text = text[:-2]
        return text
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Call):
        return f"{expr.fn}({_print(expr.arg, 0)})"
    if isinstance(expr, Neg):
        inner = _print(expr.operand, _PRECEDENCE["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PRECEDENCE["neg"] else text
    if isinstance(expr, BinOp):
        prec = _PRECEDENCE[expr.op]
        if expr.op == "^":
            # right associative, exponent may be unary
            lhs = _print(expr.lhs, prec + 1)
            rhs = _print(expr.rhs, prec)
            text = f"{lhs}^{rhs}"
        else:
            lhs = _print(expr.lhs, prec)
            rhs = _print(expr.rhs, prec + 1)
            text = f"{lhs}{expr.op}{rhs}"
        return f"({text})" if parent_prec > prec else text
    raise TypeError(f"not an Expr node: {expr!r}")


def free_vars(expr):
    out = set()
    _collect_vars(expr, out)
    return out


def _collect_vars(expr, out):
    if isinstance(expr, Var):
        out.add(expr.name)
    elif isinstance(expr, Neg):
        _collect_vars(expr.operand, out)
    elif isinstance(expr, BinOp):
        _collect_vars(expr.lhs, out)
        _collect_vars(expr.rhs, out)
    elif isinstance(expr, Call):
        _collect_vars(expr.arg, out)


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

_CALLS = {
    "sin": jet_sin,
    "cos": jet_cos,
    "exp": jet_exp,
    "log": jet_log,
    "sqrt": jet_sqrt,
}


def _eval(expr, bindings):
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        try:
            return bindings[expr.name]
        except KeyError:
            raise EvalDomainError(f"unbound variable {expr.name!r}", expression=expr)
    if isinstance(expr, Neg):
        return -_eval(expr.operand, bindings)
    if isinstance(expr, Call):
        try:
            return _CALLS[expr.fn](_eval(expr.arg, bindings))
        except EvalDomainError as err:
            if err.expression is None:
                err.expression = expr
                err.args = (f"{err.args[0]} in {to_source(expr)}",)
            raise
    if isinstance(expr, BinOp):
        lhs = _eval(expr.lhs, bindings)
        rhs = _eval(expr.rhs, bindings)
        try:
            if expr.op == "+":
                return lhs + rhs
            if expr.op == "-":
                return lhs - rhs
            if expr.op == "*":
                return lhs * rhs
            if expr.op == "/":
                return lhs / rhs
            if expr.op == "^":
                return _power(lhs, rhs)
        except ZeroDivisionError:
            raise EvalDomainError(
                f"division by zero in {to_source(expr)}", expression=expr
            )
        except EvalDomainError as err:
            if err.expression is None:
                err.expression = expr
                err.args = (f"{err.args[0]} in {to_source(expr)}",)
            raise
    raise TypeError(f"not an Expr node: {expr!r}")


def _power(base, exponent):
    # Integer exponents use repeated multiplication so that w^4 style powers
    # stay exact and never touch log(base).
    if isinstance(exponent, Jet):
        if not exponent.grad.any() and exponent.value.is_integer():
            exponent = exponent.value
        else:
            return jet_exp(exponent * jet_log(base))
    if isinstance(exponent, float) and exponent.is_integer():
        exponent = int(exponent)
    if isinstance(exponent, int):
        if isinstance(base, Jet):
            return base ** exponent
        if base == 0.0 and exponent < 0:
            raise EvalDomainError("zero base with negative exponent")
        return float(base) ** exponent
    if isinstance(base, Jet):
        return jet_exp(float(exponent) * jet_log(base))
    if base <= 0.0:
        raise EvalDomainError(f"non-positive base {base} with real exponent")
    return float(base) ** float(exponent)


def eval_value(expr, bindings):
    """Plain real evaluation with variable -> float bindings."""
    return float(_eval(expr, bindings))


def eval_jet(expr, bindings):
    """Jet evaluation with variable -> Jet bindings."""
    result = _eval(expr, bindings)
    if isinstance(result, Jet):
        return result
    some = next(iter(bindings.values()))
    return Jet.constant(float(result), some.nvars)


class ExprMap:
    """A coordinate map given by expressions over named chart coordinates.

    Callable on a list of Jets (for `numcore.jet_eval`) and directly on a
    point for plain evaluation.
    """

    def __init__(self, coords, exprs):
        self.coords = tuple(coords)
        self.exprs = [parse(e) if isinstance(e, str) else e for e in exprs]
        known = set(self.coords)
        for e in self.exprs:
            missing = free_vars(e) - known
            if missing:
                raise EvalDomainError(
                    f"unbound variable(s) {sorted(missing)} in {to_source(e)}"
                )

    def __call__(self, jets):
        bindings = dict(zip(self.coords, jets))
        return [eval_jet(e, bindings) for e in self.exprs]

    def values(self, point):
        bindings = dict(zip(self.coords, (float(x) for x in point)))
        return [eval_value(e, bindings) for e in self.exprs]
