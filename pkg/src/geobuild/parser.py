"""GeoDSL tokenizer and line parser.

Each non-empty, non-comment line has the form::

    command : inputs -> outputs

Inputs are object names or space-free numeric expressions; outputs are
fresh object names. ``#`` starts a comment; blank lines are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import expressions

IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
NUMBER_TOKEN_RE = re.compile(r"^(\d+(?:\.\d+)?|\.\d+)(°|deg|rad|r)?$")

#: Closed command vocabulary.
COMMANDS = frozenset(
    {
        "point",
        "line",
        "line_bisector",
        "segment",
        "ray",
        "circle",
        "angle",
        "const",
        "intersect",
        "parallel_line",
        "orthogonal_line",
        "midpoint",
        "rotate",
        "angular_bisector",
        "incenter",
        "circumcenter",
        "incircle",
        "circumcircle",
        "distance",
        "sum",
        "minus",
        "product",
        "ratio",
    }
)

# Token types
IDENT = "ident"
NUMBER = "num"
EXPR = "expr"
COLON = "colon"
ARROW = "arrow"


@dataclass(frozen=True)
class Token:
    type: str
    text: str
    line: int


@dataclass(frozen=True)
class Command:
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    source_line: int = 0

    def __str__(self) -> str:
        parts = [self.name, ":", *self.inputs, "->", *self.outputs]
        return " ".join(parts)


class ParseError(ValueError):
    """Parse failure with a 1-based source line and an error kind."""

    KINDS = ("bad-token", "missing-colon", "missing-arrow", "unknown-command", "bad-expression")

    def __init__(self, line: int, kind: str, message: str):
        assert kind in self.KINDS
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.kind = kind
        self.message = message


def _strip_comment(line: str) -> str:
    idx = line.find("#")
    return line if idx < 0 else line[:idx]


def _classify(chunk: str, lineno: int) -> Token:
    if chunk == ":":
        return Token(COLON, chunk, lineno)
    if chunk == "->":
        return Token(ARROW, chunk, lineno)
    if IDENT_RE.match(chunk):
        return Token(IDENT, chunk, lineno)
    if NUMBER_TOKEN_RE.match(chunk):
        return Token(NUMBER, chunk, lineno)
    if expressions.is_expression_text(chunk):
        return Token(EXPR, chunk, lineno)
    bad = next((c for c in chunk if not expressions.is_expression_text(c)), chunk[0])
    raise ParseError(lineno, "bad-token", f"illegal character {bad!r} in {chunk!r}")


def tokenize(source: str) -> list[Token]:
    """Tokenize GeoDSL source, preserving line numbers.

    Expression substrings stay whole because expressions may not contain
    spaces.
    """
    tokens: list[Token] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        for chunk in body.split():
            tokens.append(_classify(chunk, lineno))
    return tokens


def parse_line(tokens: list[Token]) -> Command:
    lineno = tokens[0].line
    head = tokens[0]
    if head.type != IDENT or head.text not in COMMANDS:
        raise ParseError(lineno, "unknown-command", f"unknown command {head.text!r}")
    if len(tokens) < 2 or tokens[1].type != COLON:
        raise ParseError(lineno, "missing-colon", f"expected ':' after {head.text!r}")
    arrow_at = next((i for i, t in enumerate(tokens) if t.type == ARROW), None)
    if arrow_at is None:
        raise ParseError(lineno, "missing-arrow", "expected '->' before outputs")
    inputs = tokens[2:arrow_at]
    outputs = tokens[arrow_at + 1 :]
    if not outputs:
        raise ParseError(lineno, "missing-arrow", "at least one output name required")
    for t in outputs:
        if t.type != IDENT:
            raise ParseError(lineno, "bad-token", f"output {t.text!r} is not a valid name")
    names = [t.text for t in outputs]
    if len(set(names)) != len(names):
        raise ParseError(lineno, "bad-token", f"duplicate output name in {names}")
    for t in inputs:
        if t.type == EXPR or t.type == NUMBER:
            try:
                expressions.check_syntax(t.text)
            except expressions.ExpressionError as exc:
                raise ParseError(lineno, "bad-expression", f"bad expression {t.text!r}: {exc}")
    return Command(
        name=head.text,
        inputs=tuple(t.text for t in inputs),
        outputs=tuple(names),
        source_line=lineno,
    )


def parse_program(source: str) -> list[Command]:
    """Parse GeoDSL source into an ordered command list.

    Raises ParseError on the first malformed line.
    """
    tokens = tokenize(source)
    commands: list[Command] = []
    i = 0
    while i < len(tokens):
        lineno = tokens[i].line
        j = i
        while j < len(tokens) and tokens[j].line == lineno:
            j += 1
        commands.append(parse_line(tokens[i:j]))
        i = j
    return commands
