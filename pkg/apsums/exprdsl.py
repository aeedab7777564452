"""Weight-function DSL: parser, printer, evaluator and symbolic derivative

Grammar (whitespace insignificant):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' signed-number)? | number '^' base
    base   := number | 't' | 'log' '(' expr ')' | 'exp' '(' expr ')' | '(' expr ')'

`u ^ number` is Pow, `c ^ u` with a constant base is PowBase. `ln` is accepted
as a synonym for `log`; every logarithm is natural.
"""
from __future__ import annotations

import enum
import logging
import math
import re
from dataclasses import dataclass

import numpy as np

from apsums import config
from apsums.errors import EvalError, ParseError

logger = logging.getLogger(__name__)


# AST

@dataclass(frozen=True, slots=True)
class Const:
    value: float


@dataclass(frozen=True, slots=True)
class Var:
    pass


@dataclass(frozen=True, slots=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow:
    base: Expr
    exponent: float


@dataclass(frozen=True, slots=True)
class PowBase:
    base: float
    exponent: Expr

    def __post_init__(self):
        if not self.base > 0:
            raise ValueError(f"PowBase needs a positive base, got {self.base!r}")


@dataclass(frozen=True, slots=True)
class Log:
    arg: Expr


@dataclass(frozen=True, slots=True)
class Exp:
    arg: Expr


@dataclass(frozen=True, slots=True)
class Neg:
    arg: Expr


Expr = Const | Var | Add | Sub | Mul | Div | Pow | PowBase | Log | Exp | Neg

T = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


# Tokenizer

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_]+")
_PUNCT = "+-*/^()"
_KEYWORDS = {"t": "t", "log": "log", "ln": "log", "exp": "exp"}


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    offset: int
    value: float = 0.0


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if not ch.isascii():
            raise ParseError(pos, {"ASCII input"}, f"unexpected character {ch!r}")
        if ch.isspace():
            pos += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, pos))
            pos += 1
            continue
        match = _NUMBER.match(text, pos)
        if match:
            value = float(match.group())
            if not math.isfinite(value):
                raise ParseError(pos, {"finite number"}, f"literal {match.group()!r} overflows a double")
            tokens.append(_Token("number", pos, value))
            pos = match.end()
            continue
        match = _NAME.match(text, pos)
        if match and match.group() in _KEYWORDS:
            tokens.append(_Token(_KEYWORDS[match.group()], pos))
            pos = match.end()
            continue
        raise ParseError(pos, {"number", "'t'", "'log'", "'exp'", "'('"}, f"unexpected input {text[pos:pos + 8]!r}")
    tokens.append(_Token("end", len(text)))
    return tokens


# Parser

_BASE_START = frozenset({"number", "'t'", "'log'", "'exp'", "'('", "'-'"})


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str) -> _Token:
        token = self.peek()
        if token.kind != kind:
            raise ParseError(token.offset, {f"'{kind}'"})
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        token = self.peek()
        if token.kind != "end":
            raise ParseError(token.offset, {"'+'", "'-'", "'*'", "'/'", "end of input"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expr:
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.factor())
        start = self.peek()
        node = self.base()
        if self.peek().kind != "^":
            return node
        self.advance()
        exponent = self.signed_number()
        if exponent is not None:
            return Pow(node, exponent)
        if isinstance(node, Const):
            if not node.value > 0:
                raise ParseError(start.offset, {"positive number"}, "base of c^expr must be positive")
            return PowBase(node.value, self.base())
        raise ParseError(self.peek().offset, {"number"}, "exponent of a non-constant base must be a number")

    def signed_number(self) -> float | None:
        sign = 1.0
        ahead = 0
        if self.peek().kind in ("+", "-"):
            sign = -1.0 if self.peek().kind == "-" else 1.0
            ahead = 1
        if self.peek(ahead).kind != "number":
            if ahead:
                raise ParseError(self.peek(ahead).offset, {"number"})
            return None
        self.pos += ahead
        return sign * self.advance().value

    def base(self) -> Expr:
        token = self.peek()
        match token.kind:
            case "number":
                self.advance()
                return Const(token.value)
            case "t":
                self.advance()
                return T
            case "log" | "exp":
                self.advance()
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Log(inner) if token.kind == "log" else Exp(inner)
            case "(":
                self.advance()
                inner = self.expr()
                self.expect(")")
                return inner
        raise ParseError(token.offset, _BASE_START)


def parse(text: str) -> Expr:
    """Parse the --f argument format into an Expr"""
    if not text or not text.strip():
        raise ParseError(0, _BASE_START, "empty expression")
    return _Parser(_tokenize(text)).parse()


def to_text(e: Expr) -> str:
    """Fully parenthesised text that parse() reads back to an equivalent Expr"""
    match e:
        case Const(value):
            return f"({value!r})" if math.copysign(1.0, value) < 0 else repr(value)
        case Var():
            return "t"
        case Add(a, b):
            return f"({to_text(a)} + {to_text(b)})"
        case Sub(a, b):
            return f"({to_text(a)} - {to_text(b)})"
        case Mul(a, b):
            return f"({to_text(a)} * {to_text(b)})"
        case Div(a, b):
            return f"({to_text(a)} / {to_text(b)})"
        case Pow(base, exponent):
            return f"({to_text(base)})^{exponent!r}"
        case PowBase(base, exponent):
            return f"{base!r}^({to_text(exponent)})"
        case Log(arg):
            return f"log({to_text(arg)})"
        case Exp(arg):
            return f"exp({to_text(arg)})"
        case Neg(arg):
            return f"(-{to_text(arg)})"
    raise TypeError(f"not an Expr: {e!r}")


# Differentiation with constant folding and x1 / x0 / +0 elimination only

def _is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _neg(b)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return Const(a.value / b.value)
    return Div(a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _pow(base: Expr, exponent: float) -> Expr:
    if exponent == 0.0:
        return ONE
    if exponent == 1.0:
        return base
    if isinstance(base, Const) and base.value > 0:
        return Const(base.value ** exponent)
    return Pow(base, exponent)


def differentiate(e: Expr) -> Expr:
    """d/dt of e; total on the grammar"""
    match e:
        case Const():
            return ZERO
        case Var():
            return ONE
        case Add(a, b):
            return _add(differentiate(a), differentiate(b))
        case Sub(a, b):
            return _sub(differentiate(a), differentiate(b))
        case Mul(a, b):
            return _add(_mul(differentiate(a), b), _mul(a, differentiate(b)))
        case Div(a, b):
            da, db = differentiate(a), differentiate(b)
            if _is_const(db, 0.0):
                return _div(da, b)
            return _div(_sub(_mul(da, b), _mul(a, db)), _pow(b, 2.0))
        case Pow(base, exponent):
            return _mul(_mul(Const(exponent), _pow(base, exponent - 1.0)), differentiate(base))
        case PowBase(base, exponent):
            return _mul(_mul(e, Const(math.log(base))), differentiate(exponent))
        case Log(arg):
            return _div(differentiate(arg), arg)
        case Exp(arg):
            return _mul(e, differentiate(arg))
        case Neg(arg):
            return _neg(differentiate(arg))
    raise TypeError(f"not an Expr: {e!r}")


# Evaluation

def _checked(value: float, t: float, what: str) -> float:
    if not math.isfinite(value):
        raise EvalError(t, f"{what} is not finite")
    return value


def _eval_scalar(e: Expr, t: float) -> float:
    match e:
        case Const(value):
            return value
        case Var():
            return t
        case Add(a, b):
            return _checked(_eval_scalar(a, t) + _eval_scalar(b, t), t, "sum")
        case Sub(a, b):
            return _checked(_eval_scalar(a, t) - _eval_scalar(b, t), t, "difference")
        case Mul(a, b):
            return _checked(_eval_scalar(a, t) * _eval_scalar(b, t), t, "product")
        case Div(a, b):
            denominator = _eval_scalar(b, t)
            if denominator == 0.0:
                raise EvalError(t, "division by zero")
            return _checked(_eval_scalar(a, t) / denominator, t, "quotient")
        case Pow(base, exponent):
            return _checked(math.pow(_eval_scalar(base, t), exponent), t, "power")
        case PowBase(base, exponent):
            return _checked(math.pow(base, _eval_scalar(exponent, t)), t, "power")
        case Log(arg):
            value = _eval_scalar(arg, t)
            if value <= 0.0:
                raise EvalError(t, f"log of non-positive value {value!r}")
            return math.log(value)
        case Exp(arg):
            return _checked(math.exp(_eval_scalar(arg, t)), t, "exp")
        case Neg(arg):
            return -_eval_scalar(arg, t)
    raise TypeError(f"not an Expr: {e!r}")


def _array_checked(values: np.ndarray, t: np.ndarray, what: str) -> np.ndarray:
    bad = ~np.isfinite(values)
    if bad.any():
        raise EvalError(float(t[np.argmax(bad)]), f"{what} is not finite")
    return values


def _eval_array(e: Expr, t: np.ndarray) -> np.ndarray:
    match e:
        case Const(value):
            return np.full(t.shape, value)
        case Var():
            return t
        case Add(a, b):
            return _array_checked(_eval_array(a, t) + _eval_array(b, t), t, "sum")
        case Sub(a, b):
            return _array_checked(_eval_array(a, t) - _eval_array(b, t), t, "difference")
        case Mul(a, b):
            return _array_checked(_eval_array(a, t) * _eval_array(b, t), t, "product")
        case Div(a, b):
            return _array_checked(_eval_array(a, t) / _eval_array(b, t), t, "quotient")
        case Pow(base, exponent):
            return _array_checked(np.power(_eval_array(base, t), exponent), t, "power")
        case PowBase(base, exponent):
            return _array_checked(np.power(base, _eval_array(exponent, t)), t, "power")
        case Log(arg):
            return _array_checked(np.log(_eval_array(arg, t)), t, "log")
        case Exp(arg):
            return _array_checked(np.exp(_eval_array(arg, t)), t, "exp")
        case Neg(arg):
            return -_eval_array(arg, t)
    raise TypeError(f"not an Expr: {e!r}")


def evaluate(e: Expr, t: float | np.ndarray) -> float | np.ndarray:
    """IEEE double value of e at t; arrays are evaluated elementwise.

    Raises EvalError on any non-finite intermediate.
    """
    if isinstance(t, np.ndarray):
        with np.errstate(all="ignore"):
            return _eval_array(e, t.astype(np.float64, copy=False))
    t = float(t)
    try:
        return _eval_scalar(e, t)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvalError(t, str(exc)) from None


def _signed_add(a: tuple[int, float], b: tuple[int, float]) -> tuple[int, float]:
    (sa, la), (sb, lb) = a, b
    if sa == 0:
        return b
    if sb == 0:
        return a
    hi, lo = (a, b) if la >= lb else (b, a)
    if sa == sb:
        return sa, hi[1] + math.log1p(math.exp(lo[1] - hi[1]))
    if la == lb:
        return 0, -math.inf
    return hi[0], hi[1] + math.log1p(-math.exp(lo[1] - hi[1]))


def _plain(signed: tuple[int, float], t: float) -> float:
    sign, logabs = signed
    if sign == 0:
        return 0.0
    if logabs > 709.0:
        raise EvalError(t, "intermediate value overflows a double")
    return sign * math.exp(logabs)


def _signed_log(e: Expr, t: float) -> tuple[int, float]:
    match e:
        case Const(value):
            return (0, -math.inf) if value == 0.0 else (1 if value > 0 else -1, math.log(abs(value)))
        case Var():
            return 1, math.log(t)
        case Add(a, b):
            return _signed_add(_signed_log(a, t), _signed_log(b, t))
        case Sub(a, b):
            sb, lb = _signed_log(b, t)
            return _signed_add(_signed_log(a, t), (-sb, lb))
        case Mul(a, b):
            (sa, la), (sb, lb) = _signed_log(a, t), _signed_log(b, t)
            return (0, -math.inf) if sa * sb == 0 else (sa * sb, la + lb)
        case Div(a, b):
            (sa, la), (sb, lb) = _signed_log(a, t), _signed_log(b, t)
            if sb == 0:
                raise EvalError(t, "division by zero")
            return (0, -math.inf) if sa == 0 else (sa * sb, la - lb)
        case Pow(base, exponent):
            sign, logabs = _signed_log(base, t)
            if sign == 0:
                if exponent <= 0:
                    raise EvalError(t, "zero raised to a non-positive power")
                return 0, -math.inf
            if sign < 0:
                if not float(exponent).is_integer():
                    raise EvalError(t, "negative base with fractional exponent")
                sign = -1 if int(exponent) % 2 else 1
            return sign, exponent * logabs
        case PowBase(base, exponent):
            power = _plain(_signed_log(exponent, t), t) * math.log(base)
            return (1, power)
        case Log(arg):
            sign, logabs = _signed_log(arg, t)
            if sign <= 0:
                raise EvalError(t, "log of non-positive value")
            # log(u) == log|u| for u > 0, even when u itself overflows
            return (0, -math.inf) if logabs == 0.0 else (1 if logabs > 0 else -1, math.log(abs(logabs)))
        case Exp(arg):
            return 1, _plain(_signed_log(arg, t), t)
        case Neg(arg):
            sign, logabs = _signed_log(arg, t)
            return -sign, logabs
    raise TypeError(f"not an Expr: {e!r}")


def evaluate_signed_log(e: Expr, t: float) -> tuple[int, float]:
    """(sign, log|e(t)|) computed without forming e(t); sign is -1, 0 or 1"""
    if not t > 0:
        raise EvalError(t, "log-domain evaluation needs t > 0")
    return _signed_log(e, float(t))


def check_domain(e: Expr, lo: float, hi: float, samples: int = config.MONOTONE_SAMPLES) -> None:
    """Raise EvalError if e is non-finite anywhere on a geometric grid over [lo, hi]"""
    grid = np.geomspace(lo, hi, samples) if hi > lo else np.array([float(lo)])
    evaluate(e, grid)


# Profiles

class Monotonicity(enum.StrEnum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    NON_MONOTONE = "non-monotone-on-sample"


@dataclass(frozen=True, slots=True)
class Canonical:
    """Structural family of a weight function with a known closed form"""
    name: str
    param: float | None = None

    def __str__(self) -> str:
        return self.name if self.param is None else f"{self.name}({self.param:g})"


def canonical_kind(e: Expr) -> Canonical | None:
    match e:
        case Const(1.0):
            return Canonical("one")
        case Log(Var()):
            return Canonical("log")
        case Div(Const(1.0), Var()) | Pow(Var(), -1.0):
            return Canonical("inv")
        case Div(Log(Var()), Var()) | Mul(Log(Var()), Pow(Var(), -1.0)):
            return Canonical("log_over_t")
        case Var():
            return Canonical("power", 1.0)
        case Pow(Var(), exponent):
            return Canonical("power", exponent)
        case PowBase(base, Var()):
            return Canonical("powbase", base)
    return None


@dataclass(frozen=True)
class FuncProfile:
    text: str
    expr: Expr
    deriv: Expr
    monotone: Monotonicity
    canonical: Canonical | None = None

    def value(self, t):
        return evaluate(self.expr, t)

    def slope(self, t):
        return evaluate(self.deriv, t)

    @property
    def constant(self) -> bool:
        """True when the symbolic derivative folded to zero"""
        return _is_const(self.deriv, 0.0)


def profile(e: Expr, sample_hi: float = config.DEFAULT_SAMPLE_HI, *, text: str | None = None) -> FuncProfile:
    """Derivative, sampled monotonicity on [2, sample_hi] and canonical family of e"""
    deriv = differentiate(e)
    grid = np.geomspace(2.0, max(sample_hi, 2.0), config.MONOTONE_SAMPLES)
    signs = {evaluate_signed_log(deriv, float(t))[0] for t in grid}
    if signs == {1}:
        monotone = Monotonicity.INCREASING
    elif signs == {-1}:
        monotone = Monotonicity.DECREASING
    else:
        monotone = Monotonicity.NON_MONOTONE
    kind = canonical_kind(e)
    text = text or to_text(e)
    logger.debug("[EXPR] profile %s: %s, canonical=%s", text, monotone, kind)
    return FuncProfile(text=text, expr=e, deriv=deriv, monotone=monotone, canonical=kind)


def profile_text(text: str, sample_hi: float = config.DEFAULT_SAMPLE_HI) -> FuncProfile:
    return profile(parse(text), sample_hi, text=text)
