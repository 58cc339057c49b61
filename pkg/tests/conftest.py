from contextlib import contextmanager
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"

#: (number, description, passed) triples collected by the acceptance suite.
ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


@pytest.fixture
def acceptance():
    """Context manager recording one pass/fail line per acceptance criterion."""

    @contextmanager
    def criterion(number: int, description: str):
        try:
            yield
        except BaseException:
            ACCEPTANCE_RESULTS.append((number, description, False))
            raise
        ACCEPTANCE_RESULTS.append((number, description, True))

    return criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for number, description, passed in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"  criterion {number:2d}: {verdict} - {description}")


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def tangent_diameter_source():
    return (DATA_DIR / "tangent_diameter.gdsl").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def tangent_diameter_task():
    from geobuild.tasks import load_tasks

    tasks, problems = load_tasks(DATA_DIR / "tangent_diameter_task.jsonl")
    assert not problems
    return tasks[0]
