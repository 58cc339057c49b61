"""Benchmark task loading, validation, and serialization.

Tasks live in UTF-8 line-delimited JSON files, one task per line, with
fields ``id``, ``problem_text``, ``required_objects``,
``verification_conditions``, ``category``, and ``difficulty``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .verifier import CONDITION_TYPES, Condition

IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

DIFFICULTY_LEVELS = (1, 2, 3, 4)

#: Minimum number of object references per condition type.
_MIN_OBJECTS = {
    "parallel": 2,
    "perpendicular": 2,
    "collinear": 3,
    "concurrent": 2,
    "concyclic": 4,
    "angle_value": 1,
    "angle_equality": 2,
    "angle_sum": 2,
    "angle_ratio": 2,
    "angle_bisector": 2,
    "segment_equality": 2,
    "segment_ratio": 2,
    "distance_equals": 1,
    "perimeter": 1,
    "point_on_segment": 2,
    "point_on_line": 2,
    "point_on_circle": 2,
    "midpoint_of": 2,
    "order_on_line": 3,
    "tangent_line": 2,
    "tangent_at_point": 3,
    "line_is_tangent": 2,
    "diameter": 2,
    "perpendicular_bisector": 2,
    "triangle_valid": 1,
    "isosceles_triangle": 1,
    "right_triangle": 1,
    "polygon_type": 1,
    "polygon_property": 1,
    "square": 1,
    "regular_polygon": 1,
}

_NEEDS_VALUE = {
    "angle_value",
    "angle_sum",
    "angle_ratio",
    "segment_ratio",
    "distance_equals",
    "perimeter",
    "polygon_type",
    "polygon_property",
}


class TaskFileError(ValueError):
    """Malformed task record or file."""


@dataclass
class RequiredObjects:
    points: list[str] = field(default_factory=list)
    segments: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    circles: list[str] = field(default_factory=list)
    polygons: list = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "RequiredObjects":
        return cls(
            points=list(data.get("points", [])),
            segments=list(data.get("segments", [])),
            lines=list(data.get("lines", [])),
            circles=list(data.get("circles", [])),
            polygons=list(data.get("polygons", [])),
        )

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "segments": [list(s) if isinstance(s, (list, tuple)) else s for s in self.segments],
            "lines": [list(s) if isinstance(s, (list, tuple)) else s for s in self.lines],
            "circles": list(self.circles),
            "polygons": [list(p) for p in self.polygons],
        }


@dataclass
class Task:
    id: str
    problem_text: str
    required_objects: RequiredObjects
    verification_conditions: list[Condition]
    category: str = ""
    difficulty: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "Task":
        try:
            return cls(
                id=str(data["id"]),
                problem_text=data.get("problem_text", ""),
                required_objects=RequiredObjects.from_dict(data.get("required_objects", {})),
                verification_conditions=[
                    Condition.from_dict(c) for c in data.get("verification_conditions", [])
                ],
                category=data.get("category", ""),
                difficulty=int(data.get("difficulty", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise TaskFileError(f"bad task record: {exc}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "problem_text": self.problem_text,
            "required_objects": self.required_objects.to_dict(),
            "verification_conditions": [c.to_dict() for c in self.verification_conditions],
            "category": self.category,
            "difficulty": self.difficulty,
        }


def _pair_names(entry) -> list[str]:
    if isinstance(entry, (list, tuple)):
        return [str(x) for x in entry]
    if isinstance(entry, str) and len(entry) == 2:
        return [entry[0], entry[1]]
    if isinstance(entry, str):
        return [entry]  # checked against declared points during validation
    return []


def validate_task(task: Task) -> list[str]:
    """Issues preventing the task from being used; empty list when valid."""
    issues: list[str] = []
    if not task.id:
        issues.append("empty task id")
    if not task.problem_text:
        issues.append("empty problem text")
    has_requirement = task.verification_conditions or any(
        getattr(task.required_objects, f) for f in ("points", "segments", "lines", "circles", "polygons")
    )
    if not has_requirement:
        issues.append("task requires no objects and checks no conditions")
    if task.difficulty not in DIFFICULTY_LEVELS:
        issues.append(f"difficulty {task.difficulty} outside {DIFFICULTY_LEVELS}")
    req = task.required_objects
    declared = set(req.points)
    for name in req.points:
        if not IDENT_RE.match(name):
            issues.append(f"bad point name {name!r}")
    for name in req.circles:
        if not IDENT_RE.match(name):
            issues.append(f"bad circle name {name!r}")
    for entry in [*req.segments, *req.lines]:
        names = _pair_names(entry)
        if isinstance(entry, (list, tuple)) and len(names) != 2:
            issues.append(f"endpoint pair {entry!r} must have exactly 2 names")
    for poly in req.polygons:
        if len(poly) < 3:
            issues.append(f"polygon {poly!r} needs at least 3 vertices")
    for cond in task.verification_conditions:
        if cond.type not in CONDITION_TYPES:
            issues.append(f"unknown condition type {cond.type!r}")
            continue
        if len(cond.objects) < _MIN_OBJECTS[cond.type]:
            issues.append(
                f"{cond.type} needs at least {_MIN_OBJECTS[cond.type]} object refs, "
                f"got {len(cond.objects)}"
            )
        if cond.type in _NEEDS_VALUE and cond.value is None:
            issues.append(f"{cond.type} requires a value")
        for ref in cond.objects:
            for name in _flatten_names(ref):
                if IDENT_RE.match(name) and name in declared:
                    continue
                # references may target auxiliary/derived objects (segments,
                # circles); only flag single undeclared point-style names
                if (
                    IDENT_RE.match(name)
                    and len(name) == 1
                    and name not in declared
                ):
                    issues.append(f"condition {cond.type} references unknown point {name!r}")
    return issues


def _flatten_names(ref) -> list[str]:
    if isinstance(ref, (list, tuple)):
        return [str(x) for x in ref]
    return [str(ref)]


def load_tasks(path, strict: bool = False) -> tuple[list[Task], list[str]]:
    """Load tasks from a line-delimited JSON file.

    Returns (tasks, problems). In strict mode the first bad record raises
    TaskFileError; otherwise bad records are reported and skipped.
    """
    tasks: list[Task] = []
    problems: list[str] = []
    seen_ids: set[str] = set()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise TaskFileError(f"cannot read task file {path}: {exc}")
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(f"line {lineno}: invalid JSON: {exc}")
                if strict:
                    raise TaskFileError(problems[-1])
                continue
            try:
                task = Task.from_dict(record)
            except TaskFileError as exc:
                problems.append(f"line {lineno}: {exc}")
                if strict:
                    raise
                continue
            issues = validate_task(task)
            if task.id in seen_ids:
                issues.append(f"duplicate task id {task.id!r}")
            if issues:
                problems.append(f"line {lineno} (task {task.id}): " + "; ".join(issues))
                if strict:
                    raise TaskFileError(problems[-1])
                continue
            seen_ids.add(task.id)
            tasks.append(task)
    return tasks, problems


def save_tasks(tasks: list[Task], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for task in tasks:
            fh.write(json.dumps(task.to_dict(), ensure_ascii=False) + "\n")
