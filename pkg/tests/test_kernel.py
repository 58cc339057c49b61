import math
import random

import pytest
from hypothesis import given, strategies as st

from geobuild import kernel
from geobuild.kernel import (
    Circle,
    KernelError,
    Line,
    Point,
    Segment,
    angle_at,
    angular_bisector,
    carrier_line,
    circle_from_point,
    circle_from_radius,
    circumcenter,
    circumcircle,
    distance,
    incenter,
    incircle,
    intersect,
    line_bisector,
    make_line,
    make_ray,
    make_segment,
    midpoint,
    orthogonal_line,
    parallel_line,
    point_line_distance,
    rotate,
    sample_point,
    scalar_arith,
)

coords = st.floats(min_value=-500, max_value=500, allow_nan=False, allow_infinity=False)


def test_primitives():
    p = Point(100, 150)
    assert (p.x, p.y) == (100, 150)
    c = circle_from_point(Point(0, 0), Point(100, 0))
    assert c.radius == pytest.approx(100)
    with pytest.raises(KernelError) as exc:
        make_segment(Point(1, 1), Point(1, 1))
    assert exc.value.kind == "degenerate-input"
    with pytest.raises(KernelError):
        circle_from_radius(Point(0, 0), -1)


def test_direction_vectors_are_unit():
    line = make_line(Point(0, 0), Point(3, 4))
    assert math.hypot(line.dx, line.dy) == pytest.approx(1, abs=1e-12)
    ray = make_ray(Point(1, 1), Point(4, 5))
    assert math.hypot(ray.dx, ray.dy) == pytest.approx(1, abs=1e-12)


def test_line_line_intersection():
    l1 = make_line(Point(0, 0), Point(2, 0))
    l2 = make_line(Point(1, -1), Point(1, 1))
    (p,) = intersect(l1, l2)
    assert (p.x, p.y) == pytest.approx((1, 0))


def test_line_circle_intersection_ordered():
    line = make_line(Point(-5, 0), Point(5, 0))
    circle = circle_from_radius(Point(0, 0), 1)
    p1, p2 = intersect(line, circle)
    assert (p1.x, p1.y) == pytest.approx((-1, 0))
    assert (p2.x, p2.y) == pytest.approx((1, 0))


def test_parallel_lines_infeasible():
    l1 = make_line(Point(0, 0), Point(1, 0))
    l2 = make_line(Point(0, 1), Point(1, 1))
    with pytest.raises(KernelError) as exc:
        intersect(l1, l2)
    assert exc.value.kind == "infeasible-construction"


def test_disjoint_circles_infeasible():
    with pytest.raises(KernelError):
        intersect(circle_from_radius(Point(0, 0), 1), circle_from_radius(Point(10, 0), 1))


def test_segment_bounded_intersection():
    seg = make_segment(Point(0, 0), Point(1, 0))
    cutter = make_line(Point(2, -1), Point(2, 1))
    with pytest.raises(KernelError):
        intersect(seg, cutter)  # crossing beyond the endpoint
    inside = make_line(Point(0.5, -1), Point(0.5, 1))
    (p,) = intersect(seg, inside)
    assert p.x == pytest.approx(0.5)


def test_circle_circle_intersection():
    c1 = circle_from_radius(Point(0, 0), 5)
    c2 = circle_from_radius(Point(6, 0), 5)
    p1, p2 = intersect(c1, c2)
    assert p1.x == pytest.approx(3)
    assert p2.x == pytest.approx(3)
    assert sorted((p1.y, p2.y)) == pytest.approx([-4, 4])


def test_parallel_and_orthogonal_lines():
    x_axis = make_line(Point(0, 0), Point(1, 0))
    par = parallel_line(Point(0, 1), x_axis)
    assert point_line_distance(Point(7, 1), par) == pytest.approx(0, abs=1e-12)
    orth = orthogonal_line(Point(100, 0), make_line(Point(0, 0), Point(100, 0)))
    assert point_line_distance(Point(100, 55), orth) == pytest.approx(0, abs=1e-12)


def test_orthogonal_through_point_on_line():
    l = make_line(Point(0, 0), Point(1, 1))
    p = Point(2, 2)
    orth = orthogonal_line(p, l)
    assert point_line_distance(p, orth) == pytest.approx(0, abs=1e-12)
    assert abs(orth.dx * l.dx + orth.dy * l.dy) < 1e-12


def test_midpoint_and_bisector():
    assert midpoint(Point(0, 0), Point(2, 2)) == Point(1, 1)
    bis = line_bisector(Point(0, 0), Point(2, 0))
    assert point_line_distance(Point(1, 5), bis) == pytest.approx(0, abs=1e-12)


def test_angular_bisector_diagonal():
    bis = angular_bisector(Point(1, 0), Point(0, 0), Point(0, 1))
    assert point_line_distance(Point(3, 3), bis) == pytest.approx(0, abs=1e-12)


def test_rotate_examples():
    p = rotate(Point(100, 0), math.radians(180), Point(0, 0))
    assert (p.x, p.y) == pytest.approx((-100, 0), abs=1e-9)
    p = rotate(Point(1, 0), math.radians(90), Point(0, 0))
    assert (p.x, p.y) == pytest.approx((0, 1), abs=1e-12)
    p = rotate(Point(3, 7), 0.0, Point(1, 1))
    assert (p.x, p.y) == (3, 7)


@given(coords, coords, coords, coords,
       st.floats(min_value=-720, max_value=720),
       st.floats(min_value=-720, max_value=720))
def test_rotation_composition(px, py, cx, cy, alpha, beta):
    p, c = Point(px, py), Point(cx, cy)
    a, b = math.radians(alpha), math.radians(beta)
    once = rotate(rotate(p, a, c), b, c)
    combined = rotate(p, a + b, c)
    assert distance(once, combined) < 1e-6 + 1e-9 * distance(p, c)


def test_triangle_centers():
    a, b, c = Point(0, 0), Point(4, 0), Point(0, 3)
    o = circumcenter(a, b, c)
    assert (o.x, o.y) == pytest.approx((2, 1.5))
    i = incenter(a, b, c)
    assert (i.x, i.y) == pytest.approx((1, 1))
    assert incircle(a, b, c).radius == pytest.approx(1.0)
    assert circumcircle(a, b, c).radius == pytest.approx(2.5)


def test_collinear_triangle_degenerate():
    with pytest.raises(KernelError):
        circumcenter(Point(0, 0), Point(1, 1), Point(2, 2))


def test_measure():
    assert distance(Point(0, 0), Point(3, 4)) == 5
    assert distance(Point(2, 2), Point(2, 2)) == 0
    mag, oriented = angle_at(Point(1, 0), Point(0, 0), Point(0, 1))
    assert mag == pytest.approx(90)
    assert oriented == pytest.approx(90)
    mag, oriented = angle_at(Point(0, 1), Point(0, 0), Point(1, 0))
    assert mag == pytest.approx(90)
    assert oriented == pytest.approx(270)


def test_scalar_arith():
    assert scalar_arith("sum", 2, 3) == 5
    assert scalar_arith("minus", 2, 3) == -1
    assert scalar_arith("product", 2, 3) == 6
    assert scalar_arith("ratio", 6, 3) == 2
    with pytest.raises(KernelError):
        scalar_arith("ratio", 1, 0)


def test_sample_point_deterministic():
    line = make_line(Point(0, 0), Point(1, 0))
    assert sample_point(line) == Point(0.25, 0.0)
    circle = circle_from_radius(Point(0, 0), 2)
    p = sample_point(circle)
    assert (p.x, p.y) == pytest.approx((math.sqrt(2), math.sqrt(2)))
    assert sample_point(circle) == sample_point(circle)


def test_tangency_realization_pattern():
    rng = random.Random(7)
    for _ in range(50):
        cx, cy = rng.uniform(-100, 100), rng.uniform(-100, 100)
        r = rng.uniform(1, 100)
        theta = rng.uniform(0, 2 * math.pi)
        center = Point(cx, cy)
        a = Point(cx + r * math.cos(theta), cy + r * math.sin(theta))
        tangent = orthogonal_line(a, make_line(center, a))
        assert abs(point_line_distance(center, tangent) - r) < 1e-9


@given(coords, coords, coords, coords, st.floats(min_value=-3, max_value=3))
def test_bisector_equidistance(ax, ay, bx, by, t):
    a, b = Point(ax, ay), Point(bx, by)
    if distance(a, b) < 1e-6:
        return
    bis = line_bisector(a, b)
    p = Point(bis.base.x + t * bis.dx, bis.base.y + t * bis.dy)
    scale = max(distance(a, b), 1.0)
    assert abs(distance(p, a) - distance(p, b)) < 1e-9 * scale + 1e-9
