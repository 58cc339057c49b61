"""Numeric and angle expression evaluation.

Expressions are space-free strings built from numbers (with optional angle
unit suffixes), the operators ``+ - * /``, parentheses, and the functions
``sin``, ``cos``, ``tan``. A bare number used as an angle defaults to
degrees.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

DIMENSIONLESS = "dimensionless"
DEGREES = "degrees"
RADIANS = "radians"

_FUNCTIONS = ("sin", "cos", "tan")

# Longest suffix first so "rad" is not lexed as "r" + "ad".
_NUMBER_RE = re.compile(r"(\d+(?:\.\d+)?|\.\d+)(°|deg|rad|r)?")

_UNIT_FOR_SUFFIX = {
    None: DIMENSIONLESS,
    "°": DEGREES,
    "deg": DEGREES,
    "rad": RADIANS,
    "r": RADIANS,
}

_ALLOWED_CHARS = re.compile(r"^[0-9A-Za-z_+\-*/().°]+$")


class ExpressionError(ValueError):
    """Malformed expression: unbalanced parens, unknown function, bad token."""


class ArithmeticFailure(ArithmeticError):
    """Runtime arithmetic problem, e.g. division by zero."""


@dataclass(frozen=True)
class Value:
    """An evaluated quantity with an angle unit tag."""

    value: float
    unit: str = DIMENSIONLESS

    def to_radians(self) -> float:
        """Interpret this value as an angle, defaulting bare numbers to degrees."""
        if self.unit == RADIANS:
            return self.value
        return math.radians(self.value)

    def to_degrees(self) -> float:
        if self.unit == RADIANS:
            return math.degrees(self.value)
        return self.value


def is_expression_text(text: str) -> bool:
    """True when every character could belong to an expression."""
    return bool(_ALLOWED_CHARS.match(text))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else "\0"

    def parse(self) -> Value:
        value = self.expr()
        if self.pos != len(self.text):
            raise ExpressionError(
                f"unexpected character {self.text[self.pos]!r} at position {self.pos}"
            )
        return value

    def expr(self) -> Value:
        left = self.term()
        while self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            right = self.term()
            left = _add_sub(left, right, op)
        return left

    def term(self) -> Value:
        left = self.unary()
        while self.peek() in "*/":
            op = self.text[self.pos]
            self.pos += 1
            right = self.unary()
            left = _mul_div(left, right, op)
        return left

    def unary(self) -> Value:
        sign = 1.0
        while self.peek() in "+-":
            if self.text[self.pos] == "-":
                sign = -sign
            self.pos += 1
        atom = self.atom()
        return Value(sign * atom.value, atom.unit)

    def atom(self) -> Value:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                raise ExpressionError("unbalanced parentheses")
            self.pos += 1
            return inner
        if ch.isdigit() or ch == ".":
            return self.number()
        if ch.isalpha() or ch == "_":
            return self.call()
        raise ExpressionError(f"unexpected character {ch!r}" if ch else "empty expression")

    def number(self) -> Value:
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise ExpressionError(f"bad number at position {self.pos}")
        self.pos = m.end()
        return Value(float(m.group(1)), _UNIT_FOR_SUFFIX[m.group(2)])

    def call(self) -> Value:
        m = re.match(r"[A-Za-z_][A-Za-z0-9_]*", self.text[self.pos:])
        name = m.group(0)
        if name not in _FUNCTIONS:
            raise ExpressionError(f"unknown function {name!r}")
        self.pos += len(name)
        if self.peek() != "(":
            raise ExpressionError(f"{name} requires parentheses")
        self.pos += 1
        arg = self.expr()
        if self.peek() != ")":
            raise ExpressionError("unbalanced parentheses")
        self.pos += 1
        radians = arg.to_radians()
        fn = {"sin": math.sin, "cos": math.cos, "tan": math.tan}[name]
        try:
            result = fn(radians)
        except ValueError as exc:
            raise ArithmeticFailure(str(exc)) from None
        if name == "tan" and abs(math.cos(radians)) < 1e-15:
            raise ArithmeticFailure("tan of odd multiple of 90°")
        return Value(result, DIMENSIONLESS)


def _add_sub(a: Value, b: Value, op: str) -> Value:
    unit = _combine_additive(a.unit, b.unit)
    av, bv = _in_unit(a, unit), _in_unit(b, unit)
    return Value(av + bv if op == "+" else av - bv, unit)


def _mul_div(a: Value, b: Value, op: str) -> Value:
    if op == "/":
        if b.value == 0:
            raise ArithmeticFailure("division by zero")
        if a.unit != DIMENSIONLESS and b.unit != DIMENSIONLESS:
            return Value(a.to_degrees() / b.to_degrees(), DIMENSIONLESS)
        return Value(a.value / b.value, a.unit if b.unit == DIMENSIONLESS else b.unit)
    if a.unit != DIMENSIONLESS and b.unit != DIMENSIONLESS:
        raise ExpressionError("cannot multiply two angles")
    unit = a.unit if a.unit != DIMENSIONLESS else b.unit
    return Value(a.value * b.value, unit)


def _combine_additive(u1: str, u2: str) -> str:
    if u1 == u2:
        return u1
    if u1 == DIMENSIONLESS:
        return u2
    if u2 == DIMENSIONLESS:
        return u1
    # degrees + radians: normalize to degrees
    return DEGREES


def _in_unit(v: Value, unit: str) -> float:
    if v.unit == unit or unit == DIMENSIONLESS:
        return v.value
    if unit == DEGREES:
        return v.to_degrees()
    return v.to_radians()


def evaluate(text: str) -> Value:
    """Evaluate an expression string. Raises ExpressionError / ArithmeticFailure."""
    if not text:
        raise ExpressionError("empty expression")
    if not is_expression_text(text):
        raise ExpressionError(f"illegal character in expression {text!r}")
    return _Parser(text).parse()


def check_syntax(text: str) -> None:
    """Raise ExpressionError if the expression is malformed.

    Arithmetic failures (division by zero) are deferred to evaluation time.
    """
    try:
        evaluate(text)
    except ArithmeticFailure:
        pass
