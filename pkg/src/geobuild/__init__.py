"""Executable plane-geometry construction engine and benchmark harness."""

from .interpreter import ConstructionState, ExecutionTrace, execute_program
from .kernel import Circle, Line, Point, Ray, Segment
from .parser import Command, ParseError, parse_program
from .tasks import Task, load_tasks
from .verifier import VerificationReport, verify_task

__all__ = [
    "Circle",
    "Command",
    "ConstructionState",
    "ExecutionTrace",
    "Line",
    "ParseError",
    "Point",
    "Ray",
    "Segment",
    "Task",
    "VerificationReport",
    "execute_program",
    "load_tasks",
    "parse_program",
    "verify_task",
]

__version__ = "0.1.0"
