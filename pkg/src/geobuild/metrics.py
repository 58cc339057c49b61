"""Aggregation of session logs into run-level metrics and report tables.

Missing objects and failed conditions are counted at each session's final
step only. A hallucination at step k is recovered at the first later step
with no hallucination of the same category; its recovery cost is that gap,
or (budget - k) when it is never recovered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

HALLUCINATION_CATEGORIES = ("undefined_reference", "syntax_error", "output_mismatch")
OBJECT_TYPES = ("points", "segments", "lines", "circles", "polygons")


@dataclass
class RunSummary:
    total: int = 0
    successes: int = 0
    steps_min: int | None = None
    steps_avg: float | None = None
    steps_max: int | None = None
    hallucinations_total: int = 0
    hallucinations_by_category: dict[str, int] = field(
        default_factory=lambda: {c: 0 for c in HALLUCINATION_CATEGORIES}
    )
    recovery_gaps: list[int] = field(default_factory=list)
    missing_objects_by_type: dict[str, int] = field(
        default_factory=lambda: {t: 0 for t in OBJECT_TYPES}
    )
    failed_conditions_by_type: dict[str, int] = field(default_factory=dict)
    by_difficulty: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def success_rate(self) -> float:
        return self.successes / self.total if self.total else 0.0

    @property
    def hallucinations_per_problem(self) -> float:
        return self.hallucinations_total / self.total if self.total else 0.0

    @property
    def avg_recovery_steps(self) -> float | None:
        if not self.recovery_gaps:
            return None
        return sum(self.recovery_gaps) / len(self.recovery_gaps)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "steps": {"min": self.steps_min, "avg": self.steps_avg, "max": self.steps_max},
            "hallucinations_total": self.hallucinations_total,
            "hallucinations_per_problem": self.hallucinations_per_problem,
            "hallucinations_by_category": self.hallucinations_by_category,
            "avg_recovery_steps": self.avg_recovery_steps,
            "missing_objects_by_type": self.missing_objects_by_type,
            "failed_conditions_by_type": self.failed_conditions_by_type,
            "by_difficulty": {
                str(k): {"successes": v[0], "total": v[1]} for k, v in sorted(self.by_difficulty.items())
            },
        }


class MalformedLogError(ValueError):
    pass


def recovery_gaps_for_session(steps: list[dict], budget: int) -> list[int]:
    """Recovery gap per hallucination event in one session."""
    gaps: list[int] = []
    for i, record in enumerate(steps):
        k = i + 1
        for category in record.get("hallucinations", []):
            recovered_at = None
            for j in range(i + 1, len(steps)):
                if category not in steps[j].get("hallucinations", []):
                    recovered_at = j + 1
                    break
            gaps.append(recovered_at - k if recovered_at is not None else budget - k)
    return gaps


def aggregate(sessions: list[dict]) -> RunSummary:
    """Fold session logs (as loaded dicts) into a RunSummary."""
    summary = RunSummary()
    success_steps: list[int] = []
    for session in sessions:
        if "status" not in session or "steps" not in session:
            raise MalformedLogError(f"session log missing status/steps: {session.keys()}")
        summary.total += 1
        steps = session["steps"]
        budget = session.get("budget", 5)
        difficulty = int(session.get("difficulty", 0))
        succeeded = session["status"] == "success"
        wins, total = summary.by_difficulty.get(difficulty, (0, 0))
        summary.by_difficulty[difficulty] = (wins + (1 if succeeded else 0), total + 1)
        if succeeded:
            summary.successes += 1
            success_steps.append(len(steps))
        for record in steps:
            for category in record.get("hallucinations", []):
                if category not in HALLUCINATION_CATEGORIES:
                    raise MalformedLogError(f"unknown hallucination category {category!r}")
                summary.hallucinations_total += 1
                summary.hallucinations_by_category[category] += 1
        summary.recovery_gaps.extend(recovery_gaps_for_session(steps, budget))
        if steps:
            report = steps[-1].get("report")
            if report:
                for obj_type, entries in report.get("missing_objects", {}).items():
                    summary.missing_objects_by_type[obj_type] = (
                        summary.missing_objects_by_type.get(obj_type, 0) + len(entries)
                    )
                for result in report.get("condition_results", []):
                    if not result["satisfied"]:
                        ctype = result["condition"]["type"]
                        summary.failed_conditions_by_type[ctype] = (
                            summary.failed_conditions_by_type.get(ctype, 0) + 1
                        )
    if success_steps:
        summary.steps_min = min(success_steps)
        summary.steps_avg = sum(success_steps) / len(success_steps)
        summary.steps_max = max(success_steps)
    return summary


def _table(rows: list[tuple], headers: tuple) -> str:
    widths = [max(len(str(r[i])) for r in [headers, *rows]) for i in range(len(headers))]
    def fmt(row):
        return "  ".join(str(v).ljust(w) for v, w in zip(row, widths)).rstrip()
    sep = "-" * (sum(widths) + 2 * (len(widths) - 1))
    return "\n".join([fmt(headers), sep, *(fmt(r) for r in rows)])


def render_report(summary: RunSummary, fmt: str = "text-table") -> str:
    """Render the summary as a text table set or machine-readable JSON."""
    if fmt == "machine-readable":
        return json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt != "text-table":
        raise ValueError(f"unknown report format {fmt!r}")
    out: list[str] = []
    steps_avg = f"{summary.steps_avg:.2f}" if summary.steps_avg is not None else "-"
    recovery = (
        f"{summary.avg_recovery_steps:.2f}" if summary.avg_recovery_steps is not None else "-"
    )
    out.append("Overall")
    out.append(
        _table(
            [
                (
                    f"{summary.successes}/{summary.total}",
                    f"{summary.success_rate * 100:.1f}%",
                    steps_avg,
                    f"{summary.hallucinations_per_problem:.2f}",
                    recovery,
                )
            ],
            ("Success", "Rate", "Avg steps", "Halluc./prob.", "Recovery steps"),
        )
    )
    out.append("")
    out.append("Hallucination types")
    out.append(
        _table(
            [(c, n) for c, n in summary.hallucinations_by_category.items()],
            ("Category", "Count"),
        )
    )
    out.append("")
    out.append("Missing objects by type")
    out.append(
        _table(
            [(t, n) for t, n in summary.missing_objects_by_type.items()],
            ("Type", "Count"),
        )
    )
    out.append("")
    if summary.failed_conditions_by_type:
        out.append("Top failed conditions")
        rows = sorted(
            summary.failed_conditions_by_type.items(), key=lambda kv: (-kv[1], kv[0])
        )[:10]
        out.append(_table(rows, ("Condition type", "Count")))
    else:
        out.append("No failed conditions recorded.")
    out.append("")
    if summary.by_difficulty:
        out.append("Success by difficulty")
        rows = [
            (level, f"{wins}/{total} ({wins / total * 100:.1f}%)")
            for level, (wins, total) in sorted(summary.by_difficulty.items())
        ]
        out.append(_table(rows, ("Level", "Success")))
    return "\n".join(out) + "\n"
