"""Bounded agent-environment interaction loop.

Each step runs parse -> execute -> render -> verify, appends a StepRecord,
and returns structured feedback. Sessions terminate on success or when the
step budget is exhausted. Step records carry no timestamps so replayed
sessions serialize byte-identically.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from . import interpreter, renderer, verifier
from .interpreter import ExecutionTrace, classify_failure
from .parser import ParseError, parse_program
from .tasks import Task

RUNNING = "running"
SUCCESS = "success"
BUDGET_EXHAUSTED = "budget_exhausted"

DEFAULT_BUDGET = 5


class SessionError(RuntimeError):
    pass


@dataclass
class Feedback:
    execution_errors: list[str] = field(default_factory=list)
    missing_objects: dict[str, list] = field(default_factory=dict)
    violated_conditions: list[dict] = field(default_factory=list)
    image_path: str | None = None

    @property
    def clean(self) -> bool:
        return (
            not self.execution_errors
            and not any(self.missing_objects.values())
            and not self.violated_conditions
        )

    def to_dict(self) -> dict:
        return {
            "execution_errors": self.execution_errors,
            "missing_objects": self.missing_objects,
            "violated_conditions": self.violated_conditions,
            "image_path": self.image_path,
        }

    def as_text(self) -> str:
        """Render the feedback as a prompt-ready text block."""
        if self.clean:
            return "All required objects present and all conditions satisfied."
        lines: list[str] = []
        for err in self.execution_errors:
            lines.append(f"Execution error: {err}")
        for kind, entries in self.missing_objects.items():
            for entry in entries:
                shown = "".join(entry) if isinstance(entry, list) else entry
                lines.append(f"Missing required {kind.rstrip('s')}: {shown}")
        for v in self.violated_conditions:
            objs = ", ".join(
                "".join(o) if isinstance(o, list) else str(o) for o in v["objects"]
            )
            detail = f" ({v['reason']})" if v.get("reason") else ""
            lines.append(
                f"Violated condition {v['type']}({objs}): residual {v['residual']:.6g}{detail}"
            )
        return "\n".join(lines)


@dataclass
class StepRecord:
    index: int
    program_source: str
    trace: ExecutionTrace | None
    parse_error: str | None
    report: verifier.VerificationReport | None
    image_path: str | None
    hallucinations: list[str]
    feedback: Feedback

    def to_dict(self) -> dict:
        failure = None
        if self.trace is not None and self.trace.failure is not None:
            f = self.trace.failure
            failure = {"line": f.step_line, "category": f.category, "detail": f.detail}
        return {
            "index": self.index,
            "program_source": self.program_source,
            "parse_error": self.parse_error,
            "executed_steps": self.trace.executed_steps if self.trace else 0,
            "failure": failure,
            "objects": sorted(self.trace.final_state.objects) if self.trace else [],
            "report": self.report.to_dict() if self.report else None,
            "image_path": self.image_path,
            "hallucinations": self.hallucinations,
            "feedback": self.feedback.to_dict(),
        }


@dataclass
class Session:
    task: Task
    budget: int = DEFAULT_BUDGET
    vision: bool = False
    output_dir: str | None = None
    steps: list[StepRecord] = field(default_factory=list)
    status: str = RUNNING

    def to_dict(self) -> dict:
        return {
            "task_id": self.task.id,
            "budget": self.budget,
            "vision": self.vision,
            "status": self.status,
            "steps": [s.to_dict() for s in self.steps],
        }


def create_session(task: Task, budget: int = DEFAULT_BUDGET, vision: bool = False,
                   output_dir: str | None = None) -> Session:
    if budget < 1:
        raise SessionError(f"budget must be >= 1, got {budget}")
    return Session(task=task, budget=budget, vision=vision, output_dir=output_dir)


def step(session: Session, program_source: str) -> Feedback:
    """Run one interaction step with the given program source."""
    if session.status != RUNNING:
        raise SessionError(f"session is {session.status}; no further steps accepted")
    index = len(session.steps) + 1
    parse_error: str | None = None
    trace: ExecutionTrace | None = None
    report: verifier.VerificationReport | None = None
    hallucinations: list[str] = []
    image_path: str | None = None

    try:
        program = parse_program(program_source)
    except ParseError as exc:
        parse_error = str(exc)
        hallucinations.append(interpreter.SYNTAX_ERROR)
        program = None
    if program is not None and not program:
        parse_error = "empty program"
        hallucinations.append(interpreter.SYNTAX_ERROR)
        program = None

    if program is not None:
        trace = interpreter.execute_program(program)
        category = classify_failure(trace.failure)
        if category is not None:
            hallucinations.append(category)
        report = verifier.verify_task(trace, session.task)
        if session.output_dir and trace.final_state.objects:
            os.makedirs(session.output_dir, exist_ok=True)
            image_path = os.path.join(
                session.output_dir, f"{session.task.id}_step_{index}.svg"
            )
            renderer.render_to_file(trace.final_state, image_path)

    feedback = Feedback()
    if parse_error is not None:
        feedback.execution_errors.append(parse_error)
    elif trace is not None and trace.failure is not None:
        feedback.execution_errors.append(str(trace.failure))
    if report is not None:
        feedback.missing_objects = report.missing_objects
        feedback.violated_conditions = [
            {
                "type": r.condition.type,
                "objects": [list(o) if isinstance(o, tuple) else o for o in r.condition.objects],
                "residual": r.residual,
                "reason": r.reason,
            }
            for r in report.condition_results
            if not r.satisfied
        ]
    if session.vision and image_path:
        feedback.image_path = image_path

    session.steps.append(
        StepRecord(
            index=index,
            program_source=program_source,
            trace=trace,
            parse_error=parse_error,
            report=report,
            image_path=image_path,
            hallucinations=hallucinations,
            feedback=feedback,
        )
    )
    if report is not None and report.success:
        session.status = SUCCESS
    elif len(session.steps) >= session.budget:
        session.status = BUDGET_EXHAUSTED
    return feedback


def run_session(session: Session, agent) -> Session:
    """Drive the loop with an agent: callable(task, history) -> program source.

    `history` is the list of prior StepRecords. Agent exceptions are
    recorded as a consumed step with a transport error.
    """
    if session.status != RUNNING:
        raise SessionError("session already terminated")
    while session.status == RUNNING:
        try:
            source = agent(session.task, list(session.steps))
        except Exception as exc:  # agent transport failure consumes a step
            source = ""
            feedback = step(session, source)
            feedback.execution_errors.append(f"agent error: {exc}")
            continue
        step(session, source if isinstance(source, str) else "")
    return session


def save_session(session: Session, path) -> None:
    """Write the session as line-delimited JSON: a header line, then one
    line per step record."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = {
            "task_id": session.task.id,
            "budget": session.budget,
            "vision": session.vision,
            "status": session.status,
            "difficulty": session.task.difficulty,
            "category": session.task.category,
        }
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for record in session.steps:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def load_session_log(path) -> dict:
    """Read a session log back into {header..., "steps": [...]}."""
    with open(path, encoding="utf-8") as fh:
        lines = [json.loads(x) for x in fh if x.strip()]
    if not lines:
        raise ValueError(f"empty session log {path}")
    header = lines[0]
    header["steps"] = lines[1:]
    return header
