"""Coverage checks and numeric verification of geometric conditions.

Verdicts are invariant to uniform coordinate scaling: incidence tolerances
are proportional to the diagram diameter, metric comparisons are relative
(with one global scale factor fitted against absolute length targets), and
angular checks are in degrees. A measured angle and its reflex are treated
as equivalent for angle targets.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

from . import kernel
from .interpreter import ConstructionState, ExecutionTrace
from .kernel import Circle, Line, Point, Ray, Segment

TOL_ANG = 0.5          # degrees
TOL_REL = 0.01         # relative tolerance for metric comparisons
TOL_LEN = 0.005        # incidence tolerance as a fraction of diagram diameter

#: Conditions carrying an absolute length target, used for scale fitting.
ABSOLUTE_LENGTH_TYPES = ("distance_equals", "perimeter")

CONDITION_TYPES = frozenset(
    {
        "parallel",
        "perpendicular",
        "collinear",
        "concurrent",
        "concyclic",
        "angle_value",
        "angle_equality",
        "angle_sum",
        "angle_ratio",
        "angle_bisector",
        "segment_equality",
        "segment_ratio",
        "distance_equals",
        "perimeter",
        "point_on_segment",
        "point_on_line",
        "point_on_circle",
        "midpoint_of",
        "order_on_line",
        "tangent_line",
        "tangent_at_point",
        "line_is_tangent",
        "diameter",
        "perpendicular_bisector",
        "triangle_valid",
        "isosceles_triangle",
        "right_triangle",
        "polygon_type",
        "polygon_property",
        "square",
        "regular_polygon",
    }
)

POLYGON_TYPES = (
    "triangle",
    "quadrilateral",
    "parallelogram",
    "rectangle",
    "rhombus",
    "square",
    "trapezoid",
    "regular",
)


@dataclass(frozen=True)
class Condition:
    type: str
    objects: tuple = ()
    value: float | str | None = None
    values: tuple | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "Condition":
        objects = tuple(
            tuple(o) if isinstance(o, (list, tuple)) else o for o in data.get("objects", ())
        )
        values = data.get("values")
        return cls(
            type=data["type"],
            objects=objects,
            value=data.get("value"),
            values=tuple(values) if values is not None else None,
        )

    def to_dict(self) -> dict:
        out: dict = {"type": self.type, "objects": [list(o) if isinstance(o, tuple) else o for o in self.objects]}
        if self.value is not None:
            out["value"] = self.value
        if self.values is not None:
            out["values"] = list(self.values)
        return out


@dataclass
class ConditionResult:
    condition: Condition
    satisfied: bool
    residual: float
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "condition": self.condition.to_dict(),
            "satisfied": self.satisfied,
            "residual": self.residual,
            "reason": self.reason,
        }


@dataclass
class ScaleFit:
    scale: float = 1.0
    applicable: bool = False


@dataclass
class VerificationReport:
    executable: bool
    missing_objects: dict[str, list]
    condition_results: list[ConditionResult]
    success: bool

    @property
    def missing_count(self) -> int:
        return sum(len(v) for v in self.missing_objects.values())

    def to_dict(self) -> dict:
        return {
            "executable": self.executable,
            "missing_objects": self.missing_objects,
            "condition_results": [r.to_dict() for r in self.condition_results],
            "success": self.success,
        }


class ReferenceError_(Exception):
    """A condition references something absent from the state."""


def diagram_diameter(state: ConstructionState) -> float:
    xs: list[float] = []
    ys: list[float] = []
    for obj in state.objects.values():
        if isinstance(obj, Point):
            xs.append(obj.x)
            ys.append(obj.y)
        elif isinstance(obj, Segment):
            xs.extend((obj.a.x, obj.b.x))
            ys.extend((obj.a.y, obj.b.y))
        elif isinstance(obj, Circle):
            xs.extend((obj.center.x - obj.radius, obj.center.x + obj.radius))
            ys.extend((obj.center.y - obj.radius, obj.center.y + obj.radius))
        elif isinstance(obj, (Line, Ray)):
            base = obj.base if isinstance(obj, Line) else obj.origin
            xs.append(base.x)
            ys.append(base.y)
    if not xs:
        return 1.0
    d = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    return max(d, 1e-9)


# ---------------------------------------------------------------------------
# Reference resolution


def _name_seq(ref) -> tuple[str, ...] | None:
    if isinstance(ref, (list, tuple)):
        return tuple(ref)
    return None


def _split_names(text: str, known: set[str]) -> tuple[str, ...] | None:
    """Split a concatenated label string like "APB" into known names."""
    if not text:
        return ()
    for length in range(len(text), 0, -1):
        head = text[:length]
        if head in known:
            rest = _split_names(text[length:], known)
            if rest is not None:
                return (head, *rest)
    return None


def _point_names(state: ConstructionState) -> set[str]:
    return {n for n, o in state.objects.items() if isinstance(o, Point)}


def resolve_point(state: ConstructionState, ref) -> Point:
    if isinstance(ref, str):
        obj = state.objects.get(ref)
        if isinstance(obj, Point):
            return obj
    raise ReferenceError_(f"point {ref!r} is not defined")


def resolve_points(state: ConstructionState, ref, count: int | None = None) -> list[Point]:
    names = _name_seq(ref)
    if names is None and isinstance(ref, str):
        names = _split_names(ref, _point_names(state))
        if names is None or (count is not None and len(names) != count):
            # fall through: maybe it names a single point
            names = (ref,)
    if names is None:
        raise ReferenceError_(f"cannot resolve points from {ref!r}")
    if count is not None and len(names) != count:
        raise ReferenceError_(f"{ref!r} does not name {count} points")
    return [resolve_point(state, n) for n in names]


def resolve_linelike(state: ConstructionState, ref):
    """Resolve to a line/segment/ray object, synthesizing a segment from
    a point pair when the reference names two points."""
    if isinstance(ref, str):
        obj = state.objects.get(ref)
        if obj is not None and obj.kind in kernel.LINELIKE:
            return obj
        names = _split_names(ref, _point_names(state))
        if names is not None and len(names) == 2:
            return kernel.make_segment(*(resolve_point(state, n) for n in names))
    else:
        names = _name_seq(ref)
        if names is not None and len(names) == 2:
            return kernel.make_segment(*(resolve_point(state, n) for n in names))
    raise ReferenceError_(f"line reference {ref!r} is not defined")


def resolve_circle(state: ConstructionState, ref) -> Circle:
    if isinstance(ref, str):
        obj = state.objects.get(ref)
        if isinstance(obj, Circle):
            return obj
        # a circle may be required by its center's label
        center = state.objects.get(ref)
        if isinstance(center, Point):
            for other in state.objects.values():
                if isinstance(other, Circle) and kernel.distance(other.center, center) <= kernel.EPS:
                    return other
    raise ReferenceError_(f"circle {ref!r} is not defined")


def resolve_angle_degrees(state: ConstructionState, ref) -> float:
    """Non-reflex magnitude in degrees of an angle reference."""
    if isinstance(ref, str):
        obj = state.objects.get(ref)
        if isinstance(obj, kernel.Angle):
            return kernel.measure_angle_object(obj)[0]
    a, b, c = resolve_points(state, ref, 3)
    return kernel.angle_at(a, b, c)[0]


def _length(state: ConstructionState, ref) -> float:
    obj = resolve_linelike(state, ref)
    if isinstance(obj, Segment):
        return kernel.distance(obj.a, obj.b)
    raise ReferenceError_(f"{ref!r} has no finite length")


# ---------------------------------------------------------------------------
# Object coverage


def _segment_present(state: ConstructionState, a: str, b: str) -> bool:
    pa, pb = state.point(a), state.point(b)
    for name, obj in state.objects.items():
        if not isinstance(obj, Segment):
            continue
        if set(state.refs.get(name, ())) == {a, b}:
            return True
        if pa is not None and pb is not None:
            ends = ((obj.a, obj.b), (obj.b, obj.a))
            if any(
                kernel.distance(x, pa) <= kernel.EPS and kernel.distance(y, pb) <= kernel.EPS
                for x, y in ends
            ):
                return True
    return False


def _line_present(state: ConstructionState, a: str, b: str) -> bool:
    # a required line is satisfied by a line, or one-way by a segment/ray
    pa, pb = state.point(a), state.point(b)
    for name, obj in state.objects.items():
        if obj.kind not in kernel.LINELIKE:
            continue
        if set(state.refs.get(name, ())) == {a, b}:
            return True
        if pa is not None and pb is not None:
            line = kernel.carrier_line(obj)
            if (
                kernel.point_line_distance(pa, line) <= kernel.EPS
                and kernel.point_line_distance(pb, line) <= kernel.EPS
            ):
                return True
    return False


def _circle_present(state: ConstructionState, name: str) -> bool:
    obj = state.objects.get(name)
    if isinstance(obj, Circle):
        return True
    center = state.point(name)
    if center is not None:
        return any(
            isinstance(o, Circle) and kernel.distance(o.center, center) <= kernel.EPS
            for o in state.objects.values()
        )
    return False


def _normalize_pair(entry, points_hint: set[str]) -> tuple[str, str]:
    names = _name_seq(entry)
    if names is None and isinstance(entry, str):
        names = _split_names(entry, points_hint)
        if names is None or len(names) != 2:
            if len(entry) == 2:
                names = (entry[0], entry[1])
            else:
                raise ValueError(f"cannot split {entry!r} into two point names")
    if names is None or len(names) != 2:
        raise ValueError(f"{entry!r} is not an endpoint pair")
    return (names[0], names[1])


def check_object_coverage(state: ConstructionState, required) -> dict[str, list]:
    """Typed lists of required objects absent from the state.

    `required` is a RequiredObjects-shaped object with points, segments,
    lines, circles, polygons attributes. Auxiliary objects never cause a
    failure.
    """
    missing: dict[str, list] = {"points": [], "segments": [], "lines": [], "circles": [], "polygons": []}
    hint = set(required.points) | _point_names(state)
    for name in required.points:
        if state.point(name) is None:
            missing["points"].append(name)
    for entry in required.segments:
        a, b = _normalize_pair(entry, hint)
        if not _segment_present(state, a, b):
            missing["segments"].append([a, b])
    for entry in required.lines:
        a, b = _normalize_pair(entry, hint)
        if not _line_present(state, a, b):
            missing["lines"].append([a, b])
    for name in required.circles:
        if not _circle_present(state, name):
            missing["circles"].append(name)
    for vertices in required.polygons:
        names = list(vertices)
        edges = [(names[i], names[(i + 1) % len(names)]) for i in range(len(names))]
        if not all(_segment_present(state, a, b) for a, b in edges):
            missing["polygons"].append(names)
    return missing


# ---------------------------------------------------------------------------
# Scale fitting


def fit_global_scale(state: ConstructionState, conditions: list[Condition]) -> ScaleFit:
    """Median of target/measured over absolute-length conditions."""
    ratios: list[float] = []
    for cond in conditions:
        if cond.type not in ABSOLUTE_LENGTH_TYPES or not isinstance(cond.value, (int, float)):
            continue
        try:
            measured = _measured_length_for(state, cond)
        except ReferenceError_:
            continue
        if measured > 0:
            ratios.append(float(cond.value) / measured)
    if not ratios:
        return ScaleFit(scale=1.0, applicable=False)
    return ScaleFit(scale=statistics.median(ratios), applicable=True)


def _measured_length_for(state: ConstructionState, cond: Condition) -> float:
    if cond.type == "distance_equals":
        if len(cond.objects) == 1:
            return _length(state, cond.objects[0])
        a, b = (resolve_point(state, o) for o in cond.objects[:2])
        return kernel.distance(a, b)
    if cond.type == "perimeter":
        pts = _polygon_points(state, cond.objects)
        return _perimeter(pts)
    raise ReferenceError_(f"{cond.type} has no length")


def _polygon_points(state: ConstructionState, objects) -> list[Point]:
    if len(objects) == 1:
        return resolve_points(state, objects[0])
    return [resolve_point(state, o) for o in objects]


def _perimeter(pts: list[Point]) -> float:
    return sum(kernel.distance(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts)))


# ---------------------------------------------------------------------------
# Condition checks


def angle_value_residual(measured: float, target: float) -> float:
    """Residual treating the measured angle and its reflex as equivalent."""
    return min(abs(measured - target), abs((360.0 - measured) - target))


def _fold_direction_gap(a1: float, a2: float) -> float:
    """Acute gap between two undirected line directions, in [0, 90]."""
    d = abs(a1 - a2) % 180.0
    return min(d, 180.0 - d)


def _rel_residual(measured: float, target: float) -> float:
    if target == 0:
        return abs(measured)
    return abs(measured - target) / abs(target)


def check_condition(
    state: ConstructionState, cond: Condition, scale: ScaleFit | None = None, diameter: float | None = None
) -> ConditionResult:
    """Evaluate one condition; unresolved references yield a violated result."""
    s = scale.scale if scale is not None else 1.0
    d = diameter if diameter is not None else diagram_diameter(state)
    tol_len = TOL_LEN * d
    try:
        satisfied, residual = _dispatch(state, cond, s, d, tol_len)
        return ConditionResult(cond, satisfied, residual)
    except ReferenceError_ as exc:
        return ConditionResult(cond, False, math.inf, reason=f"undefined-reference: {exc}")
    except (kernel.KernelError, ValueError) as exc:
        return ConditionResult(cond, False, math.inf, reason=str(exc))


def _dispatch(state, cond: Condition, s: float, d: float, tol_len: float) -> tuple[bool, float]:
    t = cond.type
    if t == "parallel" or t == "perpendicular":
        l1 = resolve_linelike(state, cond.objects[0])
        l2 = resolve_linelike(state, cond.objects[1])
        gap = _fold_direction_gap(kernel.direction_angle(l1), kernel.direction_angle(l2))
        residual = gap if t == "parallel" else abs(90.0 - gap)
        return residual <= TOL_ANG, residual

    if t == "collinear":
        pts = _polygon_points(state, cond.objects)
        return _collinear(pts, tol_len)

    if t == "concurrent":
        lines = [kernel.carrier_line(resolve_linelike(state, o)) for o in cond.objects]
        try:
            meet = kernel.intersect(lines[0], lines[1])[0]
        except kernel.KernelError:
            return False, math.inf
        residual = max(kernel.point_line_distance(meet, l) for l in lines[2:]) if len(lines) > 2 else 0.0
        return residual <= tol_len, residual / d

    if t == "concyclic":
        pts = _polygon_points(state, cond.objects)
        circle = kernel.circumcircle(pts[0], pts[1], pts[2])
        residual = max(abs(kernel.distance(p, circle.center) - circle.radius) for p in pts[3:])
        return residual <= tol_len, residual / d

    if t == "angle_value":
        measured = resolve_angle_degrees(state, cond.objects[0] if len(cond.objects) == 1 else cond.objects)
        residual = angle_value_residual(measured, float(cond.value))
        return residual <= TOL_ANG, residual

    if t == "angle_equality":
        a1 = resolve_angle_degrees(state, cond.objects[0])
        a2 = resolve_angle_degrees(state, cond.objects[1])
        residual = abs(a1 - a2)
        return residual <= TOL_ANG, residual

    if t == "angle_sum":
        total = sum(resolve_angle_degrees(state, o) for o in cond.objects)
        residual = abs(total - float(cond.value))
        return residual <= TOL_ANG, residual

    if t == "angle_ratio":
        a1 = resolve_angle_degrees(state, cond.objects[0])
        a2 = resolve_angle_degrees(state, cond.objects[1])
        residual = abs(a1 - float(cond.value) * a2)
        return residual <= TOL_ANG, residual

    if t == "angle_bisector":
        return _angle_bisector(state, cond, tol_len)

    if t == "segment_equality":
        lengths = [_segment_or_distance(state, o) for o in cond.objects]
        mean = sum(lengths) / len(lengths)
        residual = (max(lengths) - min(lengths)) / mean if mean > 0 else math.inf
        return residual <= TOL_REL, residual

    if t == "segment_ratio":
        l1 = _segment_or_distance(state, cond.objects[0])
        l2 = _segment_or_distance(state, cond.objects[1])
        if l2 == 0:
            return False, math.inf
        residual = _rel_residual(l1 / l2, float(cond.value))
        return residual <= TOL_REL, residual

    if t == "distance_equals":
        measured = _measured_length_for(state, cond)
        residual = _rel_residual(s * measured, float(cond.value))
        return residual <= TOL_REL, residual

    if t == "perimeter":
        measured = _perimeter(_polygon_points(state, cond.objects))
        residual = _rel_residual(s * measured, float(cond.value))
        return residual <= TOL_REL, residual

    if t in ("point_on_segment", "point_on_line"):
        p = resolve_point(state, cond.objects[0])
        obj = resolve_linelike(state, cond.objects[1])
        if t == "point_on_line":
            residual = kernel.point_line_distance(p, kernel.carrier_line(obj))
        else:
            residual = _point_segment_distance(p, obj)
        return residual <= tol_len, residual / d

    if t == "point_on_circle":
        p = resolve_point(state, cond.objects[0])
        circle = resolve_circle(state, cond.objects[1])
        residual = abs(kernel.distance(p, circle.center) - circle.radius)
        return residual <= tol_len, residual / d

    if t == "midpoint_of":
        m = resolve_point(state, cond.objects[0])
        a, b = _endpoint_pair(state, cond.objects[1:])
        residual = kernel.distance(m, kernel.midpoint(a, b))
        return residual <= tol_len, residual / d

    if t == "order_on_line":
        pts = _polygon_points(state, cond.objects)
        ok, collin_res = _collinear(pts, tol_len)
        if not ok:
            return False, collin_res
        line = kernel.make_line(pts[0], pts[-1])
        params = [kernel.project_parameter(p, line) for p in pts]
        monotone = params == sorted(params) or params == sorted(params, reverse=True)
        return monotone, 0.0 if monotone else math.inf

    if t in ("tangent_line", "line_is_tangent", "tangent_at_point"):
        line = kernel.carrier_line(resolve_linelike(state, cond.objects[0]))
        circle = resolve_circle(state, cond.objects[1])
        residual = abs(kernel.point_line_distance(circle.center, line) - circle.radius)
        ok = residual <= tol_len
        if t == "tangent_at_point" and ok:
            p = resolve_point(state, cond.objects[2])
            on_line = kernel.point_line_distance(p, line) <= tol_len
            on_circle = abs(kernel.distance(p, circle.center) - circle.radius) <= tol_len
            ok = on_line and on_circle
        return ok, residual / d

    if t == "diameter":
        seg = resolve_linelike(state, cond.objects[0])
        if not isinstance(seg, Segment):
            raise ReferenceError_(f"{cond.objects[0]!r} is not a segment")
        circle = resolve_circle(state, cond.objects[1])
        mid = kernel.midpoint(seg.a, seg.b)
        center_gap = kernel.distance(mid, circle.center)
        end_gap = max(
            abs(kernel.distance(seg.a, circle.center) - circle.radius),
            abs(kernel.distance(seg.b, circle.center) - circle.radius),
        )
        residual = max(center_gap, end_gap)
        return residual <= tol_len, residual / d

    if t == "perpendicular_bisector":
        line = kernel.carrier_line(resolve_linelike(state, cond.objects[0]))
        a, b = _endpoint_pair(state, cond.objects[1:])
        gap = _fold_direction_gap(
            math.degrees(math.atan2(line.dy, line.dx)),
            math.degrees(math.atan2(b.y - a.y, b.x - a.x)),
        )
        ang_residual = abs(90.0 - gap)
        mid_residual = kernel.point_line_distance(kernel.midpoint(a, b), line)
        ok = ang_residual <= TOL_ANG and mid_residual <= tol_len
        return ok, max(ang_residual, mid_residual / d)

    if t == "triangle_valid":
        pts = _polygon_points(state, cond.objects)
        if len(pts) != 3:
            raise ReferenceError_("triangle_valid needs three points")
        collinear, _ = _collinear(pts, tol_len)
        distinct = all(
            kernel.distance(pts[i], pts[j]) > tol_len for i in range(3) for j in range(i + 1, 3)
        )
        ok = distinct and not collinear
        return ok, 0.0 if ok else math.inf

    if t == "isosceles_triangle":
        pts = _polygon_points(state, cond.objects)
        a, b, c = (kernel.distance(pts[i], pts[(i + 1) % 3]) for i in range(3))
        mean = (a + b + c) / 3
        residual = min(abs(a - b), abs(b - c), abs(a - c)) / mean
        return residual <= TOL_REL, residual

    if t == "right_triangle":
        pts = _polygon_points(state, cond.objects)
        residual = min(
            abs(90.0 - kernel.angle_at(pts[i - 1], pts[i], pts[(i + 1) % 3])[0]) for i in range(3)
        )
        return residual <= TOL_ANG, residual

    if t == "square":
        return _polygon_check(_polygon_points(state, cond.objects), "square")

    if t == "regular_polygon":
        return _polygon_check(_polygon_points(state, cond.objects), "regular")

    if t in ("polygon_type", "polygon_property"):
        kind = str(cond.value).lower()
        if kind.startswith("regular"):
            kind = "regular"
        if kind not in POLYGON_TYPES:
            return False, math.inf
        return _polygon_check(_polygon_points(state, cond.objects), kind)

    raise ReferenceError_(f"unsupported condition type {t!r}")


def _segment_or_distance(state: ConstructionState, ref) -> float:
    try:
        return _length(state, ref)
    except ReferenceError_:
        pts = resolve_points(state, ref, 2)
        return kernel.distance(pts[0], pts[1])


def _endpoint_pair(state: ConstructionState, refs) -> tuple[Point, Point]:
    if len(refs) == 1:
        pts = resolve_points(state, refs[0], 2)
        return pts[0], pts[1]
    return resolve_point(state, refs[0]), resolve_point(state, refs[1])


def _point_segment_distance(p: Point, seg) -> float:
    if not isinstance(seg, Segment):
        return kernel.point_line_distance(p, kernel.carrier_line(seg))
    line = kernel.make_line(seg.a, seg.b)
    t = kernel.project_parameter(p, line)
    t = min(max(t, 0.0), kernel.distance(seg.a, seg.b))
    foot = Point(line.base.x + t * line.dx, line.base.y + t * line.dy)
    return kernel.distance(p, foot)


def _collinear(pts: list[Point], tol_len: float) -> tuple[bool, float]:
    base = None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if kernel.distance(pts[i], pts[j]) > kernel.EPS:
                base = kernel.make_line(pts[i], pts[j])
                break
        if base:
            break
    if base is None:
        return True, 0.0  # all points coincide
    residual = max(kernel.point_line_distance(p, base) for p in pts)
    return residual <= tol_len, residual


def _angle_bisector(state: ConstructionState, cond: Condition, tol_len: float) -> tuple[bool, float]:
    bisector = kernel.carrier_line(resolve_linelike(state, cond.objects[0]))
    if len(cond.objects) == 2:
        a, b, c = resolve_points(state, cond.objects[1], 3)
    else:
        a, b, c = (resolve_point(state, o) for o in cond.objects[1:4])
    if kernel.point_line_distance(b, bisector) > tol_len:
        return False, math.inf
    best = math.inf
    for sign in (1.0, -1.0):
        tip = Point(b.x + sign * bisector.dx, b.y + sign * bisector.dy)
        sub1 = kernel.angle_at(a, b, tip)[0]
        sub2 = kernel.angle_at(tip, b, c)[0]
        best = min(best, abs(sub1 - sub2))
    return best <= TOL_ANG, best


def _polygon_check(pts: list[Point], kind: str) -> tuple[bool, float]:
    n = len(pts)
    sides = [kernel.distance(pts[i], pts[(i + 1) % n]) for i in range(n)]
    if min(sides) <= kernel.EPS:
        return False, math.inf
    angles = [kernel.angle_at(pts[i - 1], pts[i], pts[(i + 1) % n])[0] for i in range(n)]
    mean_side = sum(sides) / n

    def sides_equal(idx: list[int]) -> float:
        vals = [sides[i] for i in idx]
        return (max(vals) - min(vals)) / mean_side

    def opposite_parallel(i: int) -> float:
        a1 = math.degrees(
            math.atan2(pts[(i + 1) % n].y - pts[i].y, pts[(i + 1) % n].x - pts[i].x)
        )
        j = (i + n // 2) % n
        a2 = math.degrees(
            math.atan2(pts[(j + 1) % n].y - pts[j].y, pts[(j + 1) % n].x - pts[j].x)
        )
        return _fold_direction_gap(a1, a2)

    if kind == "triangle":
        ok, _ = _collinear(pts, mean_side * TOL_REL)
        return (n == 3 and not ok), 0.0 if (n == 3 and not ok) else math.inf
    if kind == "quadrilateral":
        area = _polygon_area(pts)
        ok = n == 4 and area > (mean_side**2) * TOL_REL
        return ok, 0.0 if ok else math.inf
    if kind == "trapezoid":
        if n != 4:
            return False, math.inf
        residual = min(opposite_parallel(0), opposite_parallel(1))
        return residual <= TOL_ANG, residual
    if kind == "parallelogram":
        if n != 4:
            return False, math.inf
        residual = max(opposite_parallel(0), opposite_parallel(1))
        return residual <= TOL_ANG, residual
    if kind == "rectangle":
        if n != 4:
            return False, math.inf
        residual = max(abs(a - 90.0) for a in angles)
        return residual <= TOL_ANG, residual
    if kind == "rhombus":
        if n != 4:
            return False, math.inf
        residual = sides_equal(list(range(4)))
        return residual <= TOL_REL, residual
    if kind == "square":
        if n != 4:
            return False, math.inf
        side_res = sides_equal(list(range(4)))
        ang_res = max(abs(a - 90.0) for a in angles)
        ok = side_res <= TOL_REL and ang_res <= TOL_ANG
        return ok, max(side_res, ang_res)
    if kind == "regular":
        side_res = sides_equal(list(range(n)))
        ang_res = max(angles) - min(angles)
        ok = side_res <= TOL_REL and ang_res <= TOL_ANG
        return ok, max(side_res, ang_res)
    return False, math.inf


def _polygon_area(pts: list[Point]) -> float:
    n = len(pts)
    return abs(
        sum(pts[i].x * pts[(i + 1) % n].y - pts[(i + 1) % n].x * pts[i].y for i in range(n)) / 2
    )


# ---------------------------------------------------------------------------
# Task-level verification


def verify_task(trace_or_state, task) -> VerificationReport:
    """Aggregate executability, coverage, and condition checks for a task."""
    if isinstance(trace_or_state, ExecutionTrace):
        executable = trace_or_state.ok
        state = trace_or_state.final_state
    else:
        executable = True
        state = trace_or_state
    missing = check_object_coverage(state, task.required_objects)
    conditions = list(task.verification_conditions)
    scale = fit_global_scale(state, conditions)
    d = diagram_diameter(state)
    results = [check_condition(state, c, scale, d) for c in conditions]
    success = (
        executable
        and all(not v for v in missing.values())
        and all(r.satisfied for r in results)
    )
    return VerificationReport(
        executable=executable,
        missing_objects=missing,
        condition_results=results,
        success=success,
    )
