import math
import random

import pytest

from geobuild import verifier
from geobuild.interpreter import ConstructionState, execute_program
from geobuild.kernel import Point
from geobuild.parser import parse_program
from geobuild.tasks import RequiredObjects
from geobuild.verifier import (
    Condition,
    ScaleFit,
    angle_value_residual,
    check_condition,
    check_object_coverage,
    fit_global_scale,
    verify_task,
)


def state_from(src):
    trace = execute_program(parse_program(src))
    assert trace.failure is None, trace.failure
    return trace.final_state


def points_state(**coords):
    state = ConstructionState()
    for i, (name, (x, y)) in enumerate(coords.items(), start=1):
        state.define(name, Point(float(x), float(y)), i, ())
    return state


# ---------------------------------------------------------------------------
# coverage


def test_missing_point():
    state = points_state(A=(0, 0), B=(1, 0))
    req = RequiredObjects(points=["A", "B", "C"])
    missing = check_object_coverage(state, req)
    assert missing["points"] == ["C"]


def test_segment_unordered_endpoints():
    state = state_from("point : 0 0 -> A\npoint : 1 0 -> B\nsegment : B A -> s")
    req = RequiredObjects(points=["A", "B"], segments=[["A", "B"]])
    missing = check_object_coverage(state, req)
    assert missing["segments"] == []


def test_segment_absent():
    state = points_state(A=(0, 0), B=(1, 0))
    req = RequiredObjects(segments=[["A", "B"]])
    assert check_object_coverage(state, req)["segments"] == [["A", "B"]]


def test_line_requirement_satisfied_by_segment():
    state = state_from("point : 0 0 -> A\npoint : 1 0 -> B\nsegment : A B -> s")
    req = RequiredObjects(lines=[["A", "B"]])
    assert check_object_coverage(state, req)["lines"] == []


def test_segment_requirement_not_satisfied_by_line():
    state = state_from("point : 0 0 -> A\npoint : 1 0 -> B\nline : A B -> l")
    req = RequiredObjects(segments=[["A", "B"]])
    assert check_object_coverage(state, req)["segments"] == [["A", "B"]]


def test_circle_required_by_center_label():
    state = state_from("point : 0 0 -> O\npoint : 5 0 -> A\ncircle : O A -> circle_O")
    req = RequiredObjects(circles=["O"])
    assert check_object_coverage(state, req)["circles"] == []


def test_polygon_coverage_via_boundary_segments():
    src = (
        "point : 0 0 -> A\npoint : 4 0 -> B\npoint : 0 3 -> C\n"
        "segment : A B -> ab\nsegment : B C -> bc\nsegment : C A -> ca"
    )
    state = state_from(src)
    req = RequiredObjects(polygons=[["A", "B", "C"]])
    assert check_object_coverage(state, req)["polygons"] == []
    partial = state_from("point : 0 0 -> A\npoint : 4 0 -> B\npoint : 0 3 -> C\nsegment : A B -> ab")
    assert check_object_coverage(partial, req)["polygons"] == [["A", "B", "C"]]


def test_worked_construction_full_coverage(tangent_diameter_source, tangent_diameter_task):
    state = state_from(tangent_diameter_source)
    missing = check_object_coverage(state, tangent_diameter_task.required_objects)
    assert all(not v for v in missing.values())


def test_auxiliary_objects_never_fail_coverage():
    state = state_from(
        "point : 0 0 -> A\npoint : 1 0 -> B\npoint : 50 50 -> helper\nsegment : A B -> s"
    )
    req = RequiredObjects(points=["A", "B"], segments=[["A", "B"]])
    assert all(not v for v in check_object_coverage(state, req).values())


# ---------------------------------------------------------------------------
# scale fitting


def test_scale_fit_two_targets():
    state = points_state(A=(0, 0), B=(100, 0), C=(100, 60))
    conditions = [
        Condition("distance_equals", ("A", "B"), 5),
        Condition("distance_equals", ("B", "C"), 3),
    ]
    fit = fit_global_scale(state, conditions)
    assert fit.applicable
    assert fit.scale == pytest.approx(0.05)


def test_scale_fit_identity():
    state = points_state(A=(0, 0), B=(5, 0))
    fit = fit_global_scale(state, [Condition("distance_equals", ("A", "B"), 5)])
    assert fit.applicable and fit.scale == pytest.approx(1)


def test_scale_fit_no_lengths():
    state = points_state(A=(0, 0), B=(5, 0))
    fit = fit_global_scale(state, [Condition("parallel", ("AB", "AB"))])
    assert not fit.applicable and fit.scale == 1.0


def test_scale_fit_median_flags_outlier():
    # two consistent lengths and one outlier: the median fit keeps the
    # consistent pair satisfied and reports the outlier as violated
    state = points_state(A=(0, 0), B=(100, 0), C=(100, 60), D=(180, 60))
    conditions = [
        Condition("distance_equals", ("A", "B"), 5),
        Condition("distance_equals", ("B", "C"), 3),
        Condition("distance_equals", ("C", "D"), 3),
    ]
    fit = fit_global_scale(state, conditions)
    assert fit.scale == pytest.approx(0.05)
    results = [check_condition(state, c, fit) for c in conditions]
    assert [r.satisfied for r in results] == [True, True, False]


# ---------------------------------------------------------------------------
# conditions


def test_angle_value_reflex():
    assert angle_value_residual(320, 40) == pytest.approx(0)
    assert angle_value_residual(40, 40) == 0
    state = points_state(A=(1, 0), B=(0, 0), C=(0, 1))
    result = check_condition(state, Condition("angle_value", (("A", "B", "C"),), 90))
    assert result.satisfied and result.residual == pytest.approx(0)


def test_angle_value_violated_with_residual():
    state = points_state(A=(1, 0), B=(0, 0), C=(0, 1))
    result = check_condition(state, Condition("angle_value", (("A", "B", "C"),), 50))
    assert not result.satisfied
    assert result.residual == pytest.approx(40)


def test_parallel_and_perpendicular():
    state = state_from(
        "point : 0 0 -> A\npoint : 1 0 -> B\npoint : 0 1 -> C\npoint : 1 1 -> D\n"
        "line : A B -> ab\nline : C D -> cd\nline : A C -> ac"
    )
    assert check_condition(state, Condition("parallel", ("ab", "cd"))).satisfied
    assert check_condition(state, Condition("perpendicular", ("ab", "ac"))).satisfied
    assert not check_condition(state, Condition("parallel", ("ab", "ac"))).satisfied


def test_point_pair_line_references():
    state = points_state(A=(0, 0), B=(1, 0), C=(0, 1), D=(1, 1))
    assert check_condition(state, Condition("parallel", ("AB", "CD"))).satisfied


def test_collinear_and_order():
    state = points_state(A=(0, 0), B=(1, 0.001), C=(2, 0), D=(0.5, 5))
    assert check_condition(state, Condition("collinear", ("A", "B", "C"))).satisfied
    assert not check_condition(state, Condition("collinear", ("A", "B", "D"))).satisfied
    assert check_condition(state, Condition("order_on_line", ("A", "B", "C"))).satisfied
    assert not check_condition(state, Condition("order_on_line", ("B", "A", "C"))).satisfied


def test_concurrent_and_concyclic():
    state = points_state(A=(0, 0), B=(2, 0), C=(0, 2), D=(2, 2), E=(1, 1))
    assert check_condition(state, Condition("concurrent", ("AD", "BC", "AE"))).satisfied
    circ = points_state(P=(1, 0), Q=(0, 1), R=(-1, 0), S=(0, -1))
    assert check_condition(circ, Condition("concyclic", ("P", "Q", "R", "S"))).satisfied
    off = points_state(P=(1, 0), Q=(0, 1), R=(-1, 0), S=(0.5, -0.5))
    assert not check_condition(off, Condition("concyclic", ("P", "Q", "R", "S"))).satisfied


def test_angle_relations():
    state = points_state(A=(1, 0), B=(0, 0), C=(1, 1), D=(0, 1))
    # ABC = 45, ABD = 90
    assert check_condition(state, Condition("angle_equality", (("A", "B", "C"), ("C", "B", "D")))).satisfied
    assert check_condition(state, Condition("angle_sum", (("A", "B", "C"), ("C", "B", "D")), 90)).satisfied
    assert check_condition(state, Condition("angle_ratio", (("A", "B", "D"), ("A", "B", "C")), 2)).satisfied


def test_angle_bisector_condition():
    state = state_from(
        "point : 1 0 -> A\npoint : 0 0 -> B\npoint : 0 1 -> C\n"
        "angular_bisector : A B C -> bis\nline : A B -> notbis"
    )
    assert check_condition(state, Condition("angle_bisector", ("bis", "A", "B", "C"))).satisfied
    assert not check_condition(state, Condition("angle_bisector", ("notbis", "A", "B", "C"))).satisfied


def test_metric_conditions():
    state = points_state(A=(0, 0), B=(3, 0), C=(3, 4), D=(0, 4))
    assert check_condition(state, Condition("segment_equality", ("AB", "CD"))).satisfied
    assert check_condition(state, Condition("segment_ratio", ("BC", "AB"), 4 / 3)).satisfied
    assert check_condition(state, Condition("distance_equals", ("A", "C"), 5)).satisfied
    assert check_condition(state, Condition("perimeter", ("A", "B", "C", "D"), 14)).satisfied


def test_incidence_conditions():
    state = state_from(
        "point : 0 0 -> A\npoint : 10 0 -> B\nsegment : A B -> s\nline : A B -> l\n"
        "point : 5 0 -> M\npoint : 20 0 -> X\ncircle : A B -> c\npoint : 0 10 -> T"
    )
    assert check_condition(state, Condition("point_on_segment", ("M", "s"))).satisfied
    assert not check_condition(state, Condition("point_on_segment", ("X", "s"))).satisfied
    assert check_condition(state, Condition("point_on_line", ("X", "l"))).satisfied
    assert check_condition(state, Condition("point_on_circle", ("T", "c"))).satisfied
    assert check_condition(state, Condition("midpoint_of", ("M", "A", "B"))).satisfied


def test_tangency_and_diameter(tangent_diameter_source):
    state = state_from(tangent_diameter_source)
    assert check_condition(state, Condition("tangent_line", ("PA", "O"))).satisfied
    assert check_condition(state, Condition("line_is_tangent", ("PB", "O"))).satisfied
    assert check_condition(state, Condition("tangent_at_point", ("PA", "O", "A"))).satisfied
    assert check_condition(state, Condition("diameter", ("AC", "O"))).satisfied
    assert not check_condition(state, Condition("diameter", ("PA", "O"))).satisfied


def test_perpendicular_bisector_condition():
    state = state_from(
        "point : 0 0 -> A\npoint : 4 0 -> B\nline_bisector : A B -> bis\nline : A B -> l"
    )
    assert check_condition(state, Condition("perpendicular_bisector", ("bis", "A", "B"))).satisfied
    assert not check_condition(state, Condition("perpendicular_bisector", ("l", "A", "B"))).satisfied


def test_triangle_conditions():
    state = points_state(A=(0, 0), B=(4, 0), C=(0, 3), D=(8, 0), E=(2, 10))
    assert check_condition(state, Condition("triangle_valid", ("A", "B", "C"))).satisfied
    assert not check_condition(state, Condition("triangle_valid", ("A", "B", "D"))).satisfied
    assert check_condition(state, Condition("right_triangle", ("A", "B", "C"))).satisfied
    assert check_condition(state, Condition("isosceles_triangle", ("A", "B", "E"))).satisfied
    assert not check_condition(state, Condition("isosceles_triangle", ("A", "B", "C"))).satisfied


def test_polygon_conditions():
    sq = points_state(A=(0, 0), B=(2, 0), C=(2, 2), D=(0, 2))
    assert check_condition(sq, Condition("square", ("A", "B", "C", "D"))).satisfied
    assert check_condition(sq, Condition("polygon_type", ("A", "B", "C", "D"), "rectangle")).satisfied
    assert check_condition(sq, Condition("polygon_type", ("A", "B", "C", "D"), "rhombus")).satisfied
    para = points_state(A=(0, 0), B=(3, 0), C=(4, 2), D=(1, 2))
    assert check_condition(para, Condition("polygon_type", ("A", "B", "C", "D"), "parallelogram")).satisfied
    assert not check_condition(para, Condition("polygon_type", ("A", "B", "C", "D"), "rectangle")).satisfied
    hexa = {f"P{i}": (math.cos(i * math.pi / 3), math.sin(i * math.pi / 3)) for i in range(6)}
    state = points_state(**hexa)
    assert check_condition(
        state, Condition("regular_polygon", tuple(f"P{i}" for i in range(6)))
    ).satisfied


def test_undefined_reference_is_violation_not_crash():
    state = points_state(A=(0, 0))
    result = check_condition(state, Condition("distance_equals", ("A", "Z"), 5))
    assert not result.satisfied
    assert "undefined-reference" in result.reason


# ---------------------------------------------------------------------------
# verify_task


def test_verify_worked_construction(tangent_diameter_source, tangent_diameter_task):
    trace = execute_program(parse_program(tangent_diameter_source))
    report = verify_task(trace, tangent_diameter_task)
    assert report.success
    angle_res = report.condition_results[-1]
    assert angle_res.condition.type == "angle_value"
    assert angle_res.residual <= 0.01


def test_verify_wrong_angle_target(tangent_diameter_source, tangent_diameter_task):
    import dataclasses

    task = dataclasses.replace(
        tangent_diameter_task,
        verification_conditions=[
            *tangent_diameter_task.verification_conditions[:-1],
            Condition("angle_value", (("A", "P", "B"),), 50),
        ],
    )
    trace = execute_program(parse_program(tangent_diameter_source))
    report = verify_task(trace, task)
    assert not report.success
    assert report.condition_results[-1].residual == pytest.approx(10, abs=1e-6)


def test_nonexecutable_trace_fails(tangent_diameter_task):
    trace = execute_program(parse_program("segment : A B -> s"))
    report = verify_task(trace, tangent_diameter_task)
    assert not report.executable
    assert not report.success


# ---------------------------------------------------------------------------
# properties


def _random_state_and_conditions(rng):
    ax, ay = rng.uniform(-50, 50), rng.uniform(-50, 50)
    b = (ax + rng.uniform(1, 50), ay + rng.uniform(-20, 20))
    c = (ax + rng.uniform(-20, 20), ay + rng.uniform(1, 50))
    coords = {"A": (ax, ay), "B": b, "C": c}
    conditions = [
        Condition("distance_equals", ("A", "B"), rng.uniform(1, 20)),
        Condition("distance_equals", ("A", "C"), rng.uniform(1, 20)),
        Condition("angle_value", (("B", "A", "C"),), rng.uniform(5, 175)),
        Condition("triangle_valid", ("A", "B", "C")),
        Condition("collinear", ("A", "B", "C")),
        Condition("point_on_segment", ("C", "AB")),
    ]
    return coords, conditions


def _verdicts(coords, conditions, k):
    state = points_state(**{n: (x * k, y * k) for n, (x, y) in coords.items()})
    fit = fit_global_scale(state, conditions)
    d = verifier.diagram_diameter(state)
    return [check_condition(state, c, fit, d).satisfied for c in conditions]


def test_scale_invariance_property():
    rng = random.Random(42)
    for _ in range(50):
        coords, conditions = _random_state_and_conditions(rng)
        base = _verdicts(coords, conditions, 1.0)
        for k in (0.1, 10.0, 1000.0):
            assert _verdicts(coords, conditions, k) == base


def test_reflex_symmetry_property():
    rng = random.Random(1)
    for _ in range(200):
        # integer angles keep 360 - theta exactly representable, so the
        # reflex symmetry holds with no rounding slack at all
        theta = rng.randint(0, 360)
        target = rng.uniform(0, 360)
        assert angle_value_residual(theta, target) == angle_value_residual(360 - theta, target)
        flo = rng.uniform(0, 360)
        assert angle_value_residual(flo, target) == pytest.approx(
            angle_value_residual(360 - flo, target), abs=1e-9
        )


def test_monotone_angle_residual():
    target = 70.0
    thetas = [target + d for d in range(0, 100, 5)]
    residuals = [angle_value_residual(t, target) for t in thetas if t <= 180]
    assert residuals == sorted(residuals)
    assert angle_value_residual(target, target) == 0


def test_auxiliary_insensitivity():
    coords, conditions = _random_state_and_conditions(random.Random(3))
    state = points_state(**coords)
    fit = fit_global_scale(state, conditions)
    base = [check_condition(state, c, fit).satisfied for c in conditions]
    # auxiliary points inside the existing bounding box leave the diagram
    # diameter (and hence the length tolerances) untouched
    (ax, ay), (bx, by) = coords["A"], coords["B"]
    state.define("aux1", Point((ax + bx) / 2, (ay + by) / 2), 99, ())
    state.define("aux2", Point(ax, by), 100, ())
    fit2 = fit_global_scale(state, conditions)
    after = [check_condition(state, c, fit2).satisfied for c in conditions]
    assert base == after


def test_incidence_oracle_exact_cases():
    # exactly-constructed incidences agree with rational-arithmetic checks
    from fractions import Fraction

    rng = random.Random(9)
    for _ in range(50):
        ax, ay = rng.randint(-20, 20), rng.randint(-20, 20)
        bx, by = ax + rng.randint(1, 20), ay + rng.randint(1, 20)
        t = Fraction(rng.randint(0, 4), 4)
        mx = Fraction(ax) + t * (bx - ax)
        my = Fraction(ay) + t * (by - ay)
        # exact collinearity oracle via cross product in rationals
        cross = (Fraction(bx - ax)) * (my - ay) - (Fraction(by - ay)) * (mx - ax)
        assert cross == 0
        state = points_state(A=(ax, ay), B=(bx, by), M=(float(mx), float(my)))
        assert check_condition(state, Condition("collinear", ("A", "B", "M"))).satisfied
