import json

import pytest

from geobuild.metrics import (
    MalformedLogError,
    RunSummary,
    aggregate,
    recovery_gaps_for_session,
    render_report,
)


def session(status, steps, budget=5, difficulty=1):
    return {"status": status, "steps": steps, "budget": budget, "difficulty": difficulty}


def step(hallucinations=(), report=None):
    return {"hallucinations": list(hallucinations), "report": report}


# ---------------------------------------------------------------------------
# recovery gaps


def test_gap_recovered_next_step():
    steps = [step(["syntax_error"]), step()]
    assert recovery_gaps_for_session(steps, budget=5) == [1]


def test_gap_persisting_hallucination():
    steps = [step(["syntax_error"]), step(["syntax_error"]), step()]
    assert recovery_gaps_for_session(steps, budget=5) == [2, 1]


def test_gap_unrecovered_charges_remaining_budget():
    steps = [step(["undefined_reference"])]
    assert recovery_gaps_for_session(steps, budget=5) == [4]


def test_gap_category_specific():
    # a different category at the next step still counts as recovery
    steps = [step(["syntax_error"]), step(["undefined_reference"]), step()]
    assert recovery_gaps_for_session(steps, budget=5) == [1, 1]


def test_gap_no_hallucinations():
    assert recovery_gaps_for_session([step(), step()], budget=5) == []


# ---------------------------------------------------------------------------
# aggregation


def make_report(missing_points=(), failed_types=()):
    return {
        "missing_objects": {
            "points": list(missing_points),
            "segments": [],
            "lines": [],
            "circles": [],
            "polygons": [],
        },
        "condition_results": [
            {"satisfied": False, "condition": {"type": t}} for t in failed_types
        ],
    }


def test_aggregate_counts():
    sessions = [
        session("success", [step(report=make_report())], difficulty=1),
        session(
            "success",
            [step(["undefined_reference"]), step(report=make_report())],
            difficulty=1,
        ),
        session(
            "budget_exhausted",
            [step(report=make_report(missing_points=["C"], failed_types=["angle_value"]))] * 5,
            difficulty=2,
        ),
    ]
    summary = aggregate(sessions)
    assert summary.total == 3
    assert summary.successes == 2
    assert summary.success_rate == pytest.approx(2 / 3)
    assert summary.steps_min == 1 and summary.steps_max == 2
    assert summary.hallucinations_total == 1
    assert summary.hallucinations_by_category["undefined_reference"] == 1
    assert summary.avg_recovery_steps == 1.0
    # final step only: one missing point, one failed condition
    assert summary.missing_objects_by_type["points"] == 1
    assert summary.failed_conditions_by_type == {"angle_value": 1}
    assert summary.by_difficulty == {1: (2, 2), 2: (0, 1)}


def test_aggregate_empty_run():
    summary = aggregate([])
    assert summary.total == 0
    assert summary.success_rate == 0.0
    assert summary.steps_avg is None
    assert summary.avg_recovery_steps is None


def test_aggregate_rejects_malformed():
    with pytest.raises(MalformedLogError):
        aggregate([{"steps": []}])
    with pytest.raises(MalformedLogError):
        aggregate([session("success", [step(["made_up_category"])])])


def test_final_step_counting_ignores_intermediate_misses():
    steps = [
        step(report=make_report(missing_points=["A", "B"])),
        step(report=make_report()),
    ]
    summary = aggregate([session("success", steps)])
    assert summary.missing_objects_by_type["points"] == 0


# ---------------------------------------------------------------------------
# reports


def example_summary():
    return aggregate(
        [
            session("success", [step(report=make_report())], difficulty=1),
            session(
                "budget_exhausted",
                [step(["syntax_error"], report=make_report(failed_types=["parallel"]))] * 3,
                budget=3,
                difficulty=2,
            ),
        ]
    )


def test_text_report_sections():
    text = render_report(example_summary(), "text-table")
    for heading in (
        "Overall",
        "Hallucination types",
        "Missing objects by type",
        "Top failed conditions",
        "Success by difficulty",
    ):
        assert heading in text
    assert "1/2" in text
    assert "50.0%" in text


def test_machine_readable_report_round_trips():
    summary = example_summary()
    data = json.loads(render_report(summary, "machine-readable"))
    assert data == summary.to_dict()
    assert data["success_rate"] == 0.5
    assert data["by_difficulty"]["2"] == {"successes": 0, "total": 1}


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        render_report(RunSummary(), "csv")


def test_no_failed_conditions_message():
    summary = aggregate([session("success", [step(report=make_report())])])
    assert "No failed conditions" in render_report(summary)


def test_report_deterministic():
    assert render_report(example_summary()) == render_report(example_summary())
