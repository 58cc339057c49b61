"""Sequential execution of parsed GeoDSL programs.

Execution is fail-fast: the first failure halts the program and the
partial state is retained for feedback and rendering. Failure categories
form a closed taxonomy; exactly three of them (undefined_reference,
syntax_error, output_mismatch) count as structural hallucinations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import expressions, kernel
from .kernel import GeoObject, KernelError, Point, Scalar
from .parser import IDENT_RE, Command, ParseError

UNDEFINED_REFERENCE = "undefined_reference"
SYNTAX_ERROR = "syntax_error"
OUTPUT_MISMATCH = "output_mismatch"
INFEASIBLE_CONSTRUCTION = "infeasible_construction"
REDEFINITION = "redefinition"
ARITHMETIC_ERROR = "arithmetic_error"

FAILURE_CATEGORIES = (
    UNDEFINED_REFERENCE,
    SYNTAX_ERROR,
    OUTPUT_MISMATCH,
    INFEASIBLE_CONSTRUCTION,
    REDEFINITION,
    ARITHMETIC_ERROR,
)

HALLUCINATION_CATEGORIES = (UNDEFINED_REFERENCE, SYNTAX_ERROR, OUTPUT_MISMATCH)


@dataclass
class ExecutionFailure(Exception):
    step_line: int
    category: str
    detail: str

    def __str__(self) -> str:
        return f"line {self.step_line}: {self.category}: {self.detail}"


@dataclass
class ConstructionState:
    """Ordered name -> object table with provenance and input labels."""

    objects: dict[str, GeoObject] = field(default_factory=dict)
    provenance: dict[str, int] = field(default_factory=dict)
    refs: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def define(self, name: str, obj: GeoObject, line: int, refs: tuple[str, ...]) -> None:
        if name in self.objects:
            raise ExecutionFailure(line, REDEFINITION, f"{name!r} is already defined")
        self.objects[name] = obj
        self.provenance[name] = line
        self.refs[name] = refs

    def point(self, name: str) -> Point | None:
        obj = self.objects.get(name)
        return obj if isinstance(obj, Point) else None


@dataclass
class ExecutionTrace:
    executed_steps: int
    failure: ExecutionFailure | None
    final_state: ConstructionState

    @property
    def ok(self) -> bool:
        return self.failure is None


def classify_failure(failure: ExecutionFailure | ParseError | None) -> str | None:
    """Map a failure to its hallucination category, or None."""
    if failure is None:
        return None
    if isinstance(failure, ParseError):
        return SYNTAX_ERROR
    if failure.category in HALLUCINATION_CATEGORIES:
        return failure.category
    return None


def _resolve(state: ConstructionState, token: str, line: int):
    """Resolve an input token to a GeoObject or an expression Value."""
    if IDENT_RE.match(token):
        obj = state.objects.get(token)
        if obj is None:
            raise ExecutionFailure(line, UNDEFINED_REFERENCE, f"{token!r} is not defined")
        return obj
    try:
        return expressions.evaluate(token)
    except expressions.ArithmeticFailure as exc:
        raise ExecutionFailure(line, ARITHMETIC_ERROR, str(exc))
    except expressions.ExpressionError as exc:
        raise ExecutionFailure(line, SYNTAX_ERROR, f"bad expression {token!r}: {exc}")


def _bad_args(cmd: Command, why: str) -> ExecutionFailure:
    return ExecutionFailure(cmd.source_line, SYNTAX_ERROR, f"{cmd.name}: {why}")


def _as_point(arg, cmd: Command) -> Point:
    if isinstance(arg, Point):
        return arg
    raise _bad_args(cmd, f"expected a point, got {_describe(arg)}")


def _as_number(arg, cmd: Command) -> float:
    if isinstance(arg, expressions.Value):
        return arg.value
    if isinstance(arg, Scalar):
        return arg.value
    raise _bad_args(cmd, f"expected a number, got {_describe(arg)}")


def _as_angle_rad(arg, cmd: Command) -> float:
    if isinstance(arg, expressions.Value):
        return arg.to_radians()
    if isinstance(arg, Scalar):
        # named scalars in angle slots are degrees unless tagged radians
        v = expressions.Value(arg.value, arg.unit or expressions.DEGREES)
        return v.to_radians()
    raise _bad_args(cmd, f"expected an angle, got {_describe(arg)}")


def _as_linelike(arg, cmd: Command):
    if getattr(arg, "kind", None) in kernel.LINELIKE:
        return arg
    raise _bad_args(cmd, f"expected a line/segment/ray, got {_describe(arg)}")


def _describe(arg) -> str:
    if isinstance(arg, expressions.Value):
        return "a number"
    return getattr(arg, "kind", type(arg).__name__)


def _exec_point(cmd: Command, args) -> list[GeoObject]:
    if len(args) == 0:
        return [Point(0.0, 0.0)]
    if len(args) == 1:
        obj = args[0]
        if getattr(obj, "kind", None) in (*kernel.LINELIKE, "circle"):
            return [kernel.sample_point(obj)]
        raise _bad_args(cmd, "single input must be a line or circle to sample")
    if len(args) == 2:
        return [Point(_as_number(args[0], cmd), _as_number(args[1], cmd))]
    raise _bad_args(cmd, f"takes 0-2 inputs, got {len(args)}")


def _exec_circle(cmd: Command, args) -> list[GeoObject]:
    if len(args) != 2:
        raise _bad_args(cmd, f"takes 2 inputs, got {len(args)}")
    center = _as_point(args[0], cmd)
    if isinstance(args[1], Point):
        return [kernel.circle_from_point(center, args[1])]
    return [kernel.circle_from_radius(center, _as_number(args[1], cmd))]


def _exec_const(cmd: Command, args) -> list[GeoObject]:
    # `const : 5 -> n`; a leading `int`/`Measure` tag from older scripts
    # would arrive as an undefined reference, so only the plain form exists.
    if len(args) != 1:
        raise _bad_args(cmd, f"takes 1 input, got {len(args)}")
    value = args[0]
    if isinstance(value, expressions.Value):
        return [Scalar(value.value, "" if value.unit == expressions.DIMENSIONLESS else value.unit)]
    if isinstance(value, Scalar):
        return [value]
    raise _bad_args(cmd, "input must be numeric")


def _two_points(cmd: Command, args) -> tuple[Point, Point]:
    if len(args) != 2:
        raise _bad_args(cmd, f"takes 2 inputs, got {len(args)}")
    return _as_point(args[0], cmd), _as_point(args[1], cmd)


def _three_points(cmd: Command, args) -> tuple[Point, Point, Point]:
    if len(args) != 3:
        raise _bad_args(cmd, f"takes 3 inputs, got {len(args)}")
    return tuple(_as_point(a, cmd) for a in args)


def _exec_intersect(cmd: Command, args) -> list[GeoObject]:
    if len(args) != 2:
        raise _bad_args(cmd, f"takes 2 inputs, got {len(args)}")
    for a in args:
        if getattr(a, "kind", None) not in (*kernel.LINELIKE, "circle"):
            raise _bad_args(cmd, f"cannot intersect {_describe(a)}")
    return list(kernel.intersect(args[0], args[1]))


def _exec_rotate(cmd: Command, args) -> list[GeoObject]:
    if len(args) != 3:
        raise _bad_args(cmd, f"takes 3 inputs, got {len(args)}")
    p = _as_point(args[0], cmd)
    theta = _as_angle_rad(args[1], cmd)
    center = _as_point(args[2], cmd)
    return [kernel.rotate(p, theta, center)]


def _exec_measure_distance(cmd: Command, args) -> list[GeoObject]:
    a, b = _two_points(cmd, args)
    return [Scalar(kernel.distance(a, b))]


def _exec_arith(cmd: Command, args) -> list[GeoObject]:
    if len(args) != 2:
        raise _bad_args(cmd, f"takes 2 inputs, got {len(args)}")
    a = _as_number(args[0], cmd)
    b = _as_number(args[1], cmd)
    try:
        return [Scalar(kernel.scalar_arith(cmd.name, a, b))]
    except KernelError as exc:
        raise ExecutionFailure(cmd.source_line, ARITHMETIC_ERROR, exc.detail)


_POINT_PAIR = {
    "line": kernel.make_line,
    "segment": kernel.make_segment,
    "ray": kernel.make_ray,
    "line_bisector": kernel.line_bisector,
    "midpoint": kernel.midpoint,
}

_POINT_TRIPLE = {
    "angle": kernel.make_angle,
    "angular_bisector": kernel.angular_bisector,
    "incenter": kernel.incenter,
    "circumcenter": kernel.circumcenter,
    "incircle": kernel.incircle,
    "circumcircle": kernel.circumcircle,
}


def execute_command(state: ConstructionState, cmd: Command) -> ConstructionState:
    """Apply one command to the state in place. Raises ExecutionFailure."""
    args = [_resolve(state, tok, cmd.source_line) for tok in cmd.inputs]
    try:
        if cmd.name == "point":
            produced = _exec_point(cmd, args)
        elif cmd.name == "circle":
            produced = _exec_circle(cmd, args)
        elif cmd.name == "const":
            produced = _exec_const(cmd, args)
        elif cmd.name in _POINT_PAIR:
            a, b = _two_points(cmd, args)
            produced = [_POINT_PAIR[cmd.name](a, b)]
        elif cmd.name in _POINT_TRIPLE:
            a, b, c = _three_points(cmd, args)
            produced = [_POINT_TRIPLE[cmd.name](a, b, c)]
        elif cmd.name in ("parallel_line", "orthogonal_line"):
            if len(args) != 2:
                raise _bad_args(cmd, f"takes 2 inputs, got {len(args)}")
            p = _as_point(args[0], cmd)
            ref = _as_linelike(args[1], cmd)
            fn = kernel.parallel_line if cmd.name == "parallel_line" else kernel.orthogonal_line
            produced = [fn(p, ref)]
        elif cmd.name == "intersect":
            produced = _exec_intersect(cmd, args)
        elif cmd.name == "rotate":
            produced = _exec_rotate(cmd, args)
        elif cmd.name == "distance":
            produced = _exec_measure_distance(cmd, args)
        elif cmd.name in ("sum", "minus", "product", "ratio"):
            produced = _exec_arith(cmd, args)
        else:
            raise _bad_args(cmd, "unknown command")
    except KernelError as exc:
        category = INFEASIBLE_CONSTRUCTION
        if exc.kind == kernel.DOMAIN:
            category = ARITHMETIC_ERROR
        raise ExecutionFailure(cmd.source_line, category, exc.detail)

    if len(produced) != len(cmd.outputs):
        raise ExecutionFailure(
            cmd.source_line,
            OUTPUT_MISMATCH,
            f"{cmd.name} produced {len(produced)} object(s) but "
            f"{len(cmd.outputs)} name(s) were declared",
        )
    labels = tuple(tok for tok in cmd.inputs if IDENT_RE.match(tok))
    for name, obj in zip(cmd.outputs, produced):
        state.define(name, obj, cmd.source_line, labels)
    return state


def execute_program(program: list[Command]) -> ExecutionTrace:
    """Execute commands in order, halting at the first failure."""
    state = ConstructionState()
    for i, cmd in enumerate(program):
        try:
            execute_command(state, cmd)
        except ExecutionFailure as failure:
            return ExecutionTrace(executed_steps=i, failure=failure, final_state=state)
    return ExecutionTrace(executed_steps=len(program), failure=None, final_state=state)
