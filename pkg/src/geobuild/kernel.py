"""Deterministic plane-geometry kernel.

All operations are pure functions over immutable objects. Two-point
intersections are ordered lexicographically (x, then y) so replays are
bit-identical. Angles are handled in radians internally; degree values
appear only at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EPS = 1e-9

INFEASIBLE = "infeasible-construction"
DEGENERATE = "degenerate-input"
DOMAIN = "domain-error"


class KernelError(Exception):
    def __init__(self, kind: str, detail: str):
        super().__init__(detail)
        self.kind = kind
        self.detail = detail


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    kind = "point"


@dataclass(frozen=True)
class Line:
    base: Point
    dx: float
    dy: float
    kind = "line"


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point
    kind = "segment"


@dataclass(frozen=True)
class Ray:
    origin: Point
    dx: float
    dy: float
    kind = "ray"


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float
    kind = "circle"


@dataclass(frozen=True)
class Angle:
    """Angle at `vertex` from direction (d1x,d1y) to (d2x,d2y)."""

    vertex: Point
    d1x: float
    d1y: float
    d2x: float
    d2y: float
    kind = "angle"


@dataclass(frozen=True)
class Scalar:
    value: float
    unit: str = ""
    kind = "scalar"


GeoObject = Point | Line | Segment | Ray | Circle | Angle | Scalar

LINELIKE = ("line", "segment", "ray")


def _norm(dx: float, dy: float) -> tuple[float, float]:
    n = math.hypot(dx, dy)
    if n < EPS:
        raise KernelError(DEGENERATE, "zero-length direction")
    return dx / n, dy / n


def distance(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def make_line(a: Point, b: Point) -> Line:
    if distance(a, b) < EPS:
        raise KernelError(DEGENERATE, "line requires two distinct points")
    dx, dy = _norm(b.x - a.x, b.y - a.y)
    return Line(a, dx, dy)


def make_segment(a: Point, b: Point) -> Segment:
    if distance(a, b) < EPS:
        raise KernelError(DEGENERATE, "segment endpoints coincide")
    return Segment(a, b)


def make_ray(a: Point, b: Point) -> Ray:
    if distance(a, b) < EPS:
        raise KernelError(DEGENERATE, "ray requires two distinct points")
    dx, dy = _norm(b.x - a.x, b.y - a.y)
    return Ray(a, dx, dy)


def circle_from_point(center: Point, through: Point) -> Circle:
    r = distance(center, through)
    if r < EPS:
        raise KernelError(DEGENERATE, "circle through its own center")
    return Circle(center, r)


def circle_from_radius(center: Point, r: float) -> Circle:
    if r <= 0:
        raise KernelError(DEGENERATE, f"circle radius must be positive, got {r}")
    return Circle(center, r)


def make_angle(a: Point, b: Point, c: Point) -> Angle:
    if distance(a, b) < EPS or distance(c, b) < EPS:
        raise KernelError(DEGENERATE, "angle arms must be nonzero")
    d1 = _norm(a.x - b.x, a.y - b.y)
    d2 = _norm(c.x - b.x, c.y - b.y)
    return Angle(b, d1[0], d1[1], d2[0], d2[1])


def carrier_line(obj: GeoObject) -> Line:
    """The infinite line underlying a line, segment, or ray."""
    if isinstance(obj, Line):
        return obj
    if isinstance(obj, Segment):
        return make_line(obj.a, obj.b)
    if isinstance(obj, Ray):
        return Line(obj.origin, obj.dx, obj.dy)
    raise KernelError(DOMAIN, f"{obj.kind} has no carrier line")


def sample_point(obj: GeoObject) -> Point:
    """Deterministic point on a line (t=0.25 from base) or circle (at 45°)."""
    if isinstance(obj, Line):
        return Point(obj.base.x + 0.25 * obj.dx, obj.base.y + 0.25 * obj.dy)
    if isinstance(obj, (Segment, Ray)):
        line = carrier_line(obj)
        return Point(line.base.x + 0.25 * line.dx, line.base.y + 0.25 * line.dy)
    if isinstance(obj, Circle):
        t = math.radians(45.0)
        return Point(
            obj.center.x + obj.radius * math.cos(t),
            obj.center.y + obj.radius * math.sin(t),
        )
    raise KernelError(DOMAIN, f"cannot sample a point on a {obj.kind}")


def point_line_distance(p: Point, line: Line) -> float:
    # |cross(p - base, dir)| with unit dir
    return abs((p.x - line.base.x) * line.dy - (p.y - line.base.y) * line.dx)


def project_parameter(p: Point, line: Line) -> float:
    return (p.x - line.base.x) * line.dx + (p.y - line.base.y) * line.dy


def foot_of_perpendicular(p: Point, line: Line) -> Point:
    t = project_parameter(p, line)
    return Point(line.base.x + t * line.dx, line.base.y + t * line.dy)


def contains_point(obj: GeoObject, p: Point, tol: float = EPS) -> bool:
    """Whether p lies on the (possibly bounded) object within tol."""
    if isinstance(obj, Line):
        return point_line_distance(p, obj) <= tol
    if isinstance(obj, Segment):
        line = carrier_line(obj)
        if point_line_distance(p, line) > tol:
            return False
        t = project_parameter(p, line)
        return -tol <= t <= distance(obj.a, obj.b) + tol
    if isinstance(obj, Ray):
        line = carrier_line(obj)
        if point_line_distance(p, line) > tol:
            return False
        return project_parameter(p, line) >= -tol
    if isinstance(obj, Circle):
        return abs(distance(p, obj.center) - obj.radius) <= tol
    raise KernelError(DOMAIN, f"containment undefined for {obj.kind}")


def _line_line(l1: Line, l2: Line) -> list[Point]:
    det = l1.dx * l2.dy - l1.dy * l2.dx
    if abs(det) < 1e-12:
        raise KernelError(INFEASIBLE, "lines are parallel or coincident")
    bx = l2.base.x - l1.base.x
    by = l2.base.y - l1.base.y
    t = (bx * l2.dy - by * l2.dx) / det
    return [Point(l1.base.x + t * l1.dx, l1.base.y + t * l1.dy)]


def _line_circle(line: Line, circle: Circle) -> list[Point]:
    foot = foot_of_perpendicular(circle.center, line)
    d = distance(foot, circle.center)
    if d > circle.radius + EPS:
        raise KernelError(INFEASIBLE, "line and circle do not intersect")
    if abs(d - circle.radius) <= EPS:
        return [foot]
    half = math.sqrt(max(circle.radius**2 - d**2, 0.0))
    return [
        Point(foot.x - half * line.dx, foot.y - half * line.dy),
        Point(foot.x + half * line.dx, foot.y + half * line.dy),
    ]


def _circle_circle(c1: Circle, c2: Circle) -> list[Point]:
    d = distance(c1.center, c2.center)
    if d < EPS:
        raise KernelError(INFEASIBLE, "concentric circles")
    if d > c1.radius + c2.radius + EPS or d < abs(c1.radius - c2.radius) - EPS:
        raise KernelError(INFEASIBLE, "circles do not intersect")
    a = (c1.radius**2 - c2.radius**2 + d**2) / (2 * d)
    h2 = c1.radius**2 - a**2
    ux = (c2.center.x - c1.center.x) / d
    uy = (c2.center.y - c1.center.y) / d
    mx = c1.center.x + a * ux
    my = c1.center.y + a * uy
    if h2 <= EPS**2:
        return [Point(mx, my)]
    h = math.sqrt(h2)
    return [Point(mx - h * uy, my + h * ux), Point(mx + h * uy, my - h * ux)]


def intersect(obj1: GeoObject, obj2: GeoObject) -> list[Point]:
    """Intersection points of two linear/circular objects.

    Two-point results are ordered by ascending (x, y). For bounded objects
    (segments, rays) a candidate must lie on the bounded part within 1e-9.
    """
    for obj in (obj1, obj2):
        if obj.kind not in LINELIKE and obj.kind != "circle":
            raise KernelError(DOMAIN, f"cannot intersect a {obj.kind}")
    if obj1.kind == "circle" and obj2.kind == "circle":
        points = _circle_circle(obj1, obj2)
    elif obj1.kind == "circle":
        points = _line_circle(carrier_line(obj2), obj1)
    elif obj2.kind == "circle":
        points = _line_circle(carrier_line(obj1), obj2)
    else:
        points = _line_line(carrier_line(obj1), carrier_line(obj2))
    points = [
        p
        for p in points
        if all(
            obj.kind == "circle" or contains_point(obj, p, EPS) for obj in (obj1, obj2)
        )
    ]
    if not points:
        raise KernelError(INFEASIBLE, "no intersection on the bounded objects")
    points.sort(key=lambda p: (p.x, p.y))
    return points


def parallel_line(p: Point, ref: GeoObject) -> Line:
    line = carrier_line(ref)
    return Line(p, line.dx, line.dy)


def orthogonal_line(p: Point, ref: GeoObject) -> Line:
    line = carrier_line(ref)
    return Line(p, -line.dy, line.dx)


def midpoint(a: Point, b: Point) -> Point:
    return Point((a.x + b.x) / 2, (a.y + b.y) / 2)


def line_bisector(a: Point, b: Point) -> Line:
    if distance(a, b) < EPS:
        raise KernelError(DEGENERATE, "bisector requires distinct points")
    m = midpoint(a, b)
    dx, dy = _norm(b.x - a.x, b.y - a.y)
    return Line(m, -dy, dx)


def angular_bisector(a: Point, b: Point, c: Point) -> Line:
    """Internal bisector of the angle at vertex b."""
    d1x, d1y = _norm(a.x - b.x, a.y - b.y)
    d2x, d2y = _norm(c.x - b.x, c.y - b.y)
    sx, sy = d1x + d2x, d1y + d2y
    if math.hypot(sx, sy) < EPS:
        # straight angle: bisector is perpendicular to the arms
        sx, sy = -d1y, d1x
    dx, dy = _norm(sx, sy)
    return Line(b, dx, dy)


def rotate(p: Point, theta_rad: float, center: Point) -> Point:
    cos_t, sin_t = math.cos(theta_rad), math.sin(theta_rad)
    x, y = p.x - center.x, p.y - center.y
    return Point(center.x + x * cos_t - y * sin_t, center.y + x * sin_t + y * cos_t)


def _side_lengths(a: Point, b: Point, c: Point) -> tuple[float, float, float]:
    # Opposite-side convention: la faces vertex a, etc.
    return distance(b, c), distance(c, a), distance(a, b)


def _require_triangle(a: Point, b: Point, c: Point) -> None:
    area2 = abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
    if area2 < EPS:
        raise KernelError(DEGENERATE, "collinear triangle vertices")


def circumcenter(a: Point, b: Point, c: Point) -> Point:
    _require_triangle(a, b, c)
    d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y))
    a2, b2, c2 = a.x**2 + a.y**2, b.x**2 + b.y**2, c.x**2 + c.y**2
    ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d
    uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d
    return Point(ux, uy)


def incenter(a: Point, b: Point, c: Point) -> Point:
    _require_triangle(a, b, c)
    la, lb, lc = _side_lengths(a, b, c)
    s = la + lb + lc
    return Point((la * a.x + lb * b.x + lc * c.x) / s, (la * a.y + lb * b.y + lc * c.y) / s)


def circumcircle(a: Point, b: Point, c: Point) -> Circle:
    o = circumcenter(a, b, c)
    return Circle(o, distance(o, a))


def incircle(a: Point, b: Point, c: Point) -> Circle:
    i = incenter(a, b, c)
    la, lb, lc = _side_lengths(a, b, c)
    s = (la + lb + lc) / 2
    area = math.sqrt(max(s * (s - la) * (s - lb) * (s - lc), 0.0))
    return Circle(i, area / s)


def angle_at(a: Point, b: Point, c: Point) -> tuple[float, float]:
    """Angle at vertex b from ray BA to ray BC.

    Returns (magnitude, oriented) in degrees: the non-reflex magnitude in
    [0, 180] and the counterclockwise oriented value in [0, 360).
    """
    if distance(a, b) < EPS or distance(c, b) < EPS:
        raise KernelError(DEGENERATE, "angle arms must be nonzero")
    a1 = math.atan2(a.y - b.y, a.x - b.x)
    a2 = math.atan2(c.y - b.y, c.x - b.x)
    oriented = math.degrees(a2 - a1) % 360.0
    magnitude = min(oriented, 360.0 - oriented)
    return magnitude, oriented


def measure_angle_object(angle: Angle) -> tuple[float, float]:
    a = Point(angle.vertex.x + angle.d1x, angle.vertex.y + angle.d1y)
    c = Point(angle.vertex.x + angle.d2x, angle.vertex.y + angle.d2y)
    return angle_at(a, angle.vertex, c)


def scalar_arith(op: str, a: float, b: float) -> float:
    if op == "sum":
        return a + b
    if op == "minus":
        return a - b
    if op == "product":
        return a * b
    if op == "ratio":
        if b == 0:
            raise KernelError(DOMAIN, "division by zero")
        return a / b
    raise KernelError(DOMAIN, f"unknown arithmetic op {op!r}")


def direction_angle(obj: GeoObject) -> float:
    """Direction of a line-like object in degrees, folded to [0, 180)."""
    line = carrier_line(obj)
    return math.degrees(math.atan2(line.dy, line.dx)) % 180.0
