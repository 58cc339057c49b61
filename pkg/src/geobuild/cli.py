"""Command-line interface.

Exit codes: 0 success, 1 task failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import environment, metrics, renderer, tasks as task_model, verifier
from .agents import RemoteAgent, RemoteConfig, ReplayAgent
from .interpreter import execute_program
from .parser import ParseError, parse_program

EXIT_OK = 0
EXIT_TASK_FAILURE = 1
EXIT_INPUT_ERROR = 2


@dataclass
class RunConfig:
    tasks_path: str
    agent_spec: str
    budget: int = environment.DEFAULT_BUDGET
    vision: bool = False
    output_dir: str = "runs"
    workers: int = 1
    seed: int = 0
    model: str = ""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read {path}: {exc}", EXIT_INPUT_ERROR))


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _describe_object(obj) -> str:
    if obj.kind == "point":
        return f"point ({obj.x:.6g}, {obj.y:.6g})"
    if obj.kind == "segment":
        return f"segment ({obj.a.x:.6g},{obj.a.y:.6g})-({obj.b.x:.6g},{obj.b.y:.6g})"
    if obj.kind == "circle":
        return f"circle center ({obj.center.x:.6g},{obj.center.y:.6g}) r={obj.radius:.6g}"
    if obj.kind == "scalar":
        return f"scalar {obj.value:.6g}"
    return obj.kind


def cmd_exec(args) -> int:
    source = _read(args.program)
    try:
        program = parse_program(source)
    except ParseError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    trace = execute_program(program)
    if not trace.final_state.objects:
        print("(empty state)")
    for name, obj in trace.final_state.objects.items():
        print(f"{name}: {_describe_object(obj)}")
    if args.render and trace.final_state.objects:
        renderer.render_to_file(trace.final_state, args.render)
        print(f"image written to {args.render}")
    if trace.failure is not None:
        print(f"execution failed: {trace.failure}", file=sys.stderr)
        return EXIT_TASK_FAILURE
    return EXIT_OK


def cmd_render(args) -> int:
    source = _read(args.program)
    try:
        program = parse_program(source)
    except ParseError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    trace = execute_program(program)
    if not trace.final_state.objects:
        return _fail("empty state: nothing to render", EXIT_INPUT_ERROR)
    renderer.render_to_file(trace.final_state, args.output)
    print(f"image written to {args.output}")
    return EXIT_OK if trace.failure is None else EXIT_TASK_FAILURE


def _load_task(path: str, task_id: str | None):
    loaded, problems = task_model.load_tasks(path)
    for problem in problems:
        print(f"warning: {problem}", file=sys.stderr)
    if not loaded:
        raise SystemExit(_fail(f"no valid tasks in {path}", EXIT_INPUT_ERROR))
    if task_id is None:
        return loaded[0]
    for task in loaded:
        if task.id == task_id:
            return task
    raise SystemExit(_fail(f"task {task_id!r} not found in {path}", EXIT_INPUT_ERROR))


def cmd_verify(args) -> int:
    task = _load_task(args.task, args.task_id)
    source = _read(args.program)
    try:
        program = parse_program(source)
    except ParseError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    trace = execute_program(program)
    report = verifier.verify_task(trace, task)
    print(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    return EXIT_OK if report.success else EXIT_TASK_FAILURE


def cmd_validate_tasks(args) -> int:
    loaded, problems = task_model.load_tasks(args.tasks)
    for problem in problems:
        print(problem)
    print(f"{len(loaded)} valid task(s), {len(problems)} problem(s)")
    return EXIT_OK if not problems else EXIT_INPUT_ERROR


def _make_agent(config: RunConfig):
    kind, _, detail = config.agent_spec.partition(":")
    if kind == "replay":
        return ReplayAgent.from_file(detail)
    if kind == "remote":
        if not config.model:
            raise SystemExit(_fail("remote agent requires --model", EXIT_INPUT_ERROR))
        return RemoteAgent(RemoteConfig(endpoint=detail, model=config.model), vision=config.vision)
    raise SystemExit(_fail(f"unknown agent spec {config.agent_spec!r}", EXIT_INPUT_ERROR))


def _run_one(task, agent, config: RunConfig) -> dict:
    session = environment.create_session(
        task, budget=config.budget, vision=config.vision, output_dir=config.output_dir
    )
    try:
        environment.run_session(session, agent)
    except environment.SessionError:
        pass
    log_path = os.path.join(config.output_dir, f"session_{task.id}.jsonl")
    environment.save_session(session, log_path)
    return environment.load_session_log(log_path)


def cmd_run(args) -> int:
    config = RunConfig(
        tasks_path=args.tasks,
        agent_spec=args.agent,
        budget=args.budget,
        vision=args.vision,
        output_dir=args.out,
        workers=args.workers,
        seed=args.seed,
        model=args.model or "",
    )
    loaded, problems = task_model.load_tasks(config.tasks_path)
    for problem in problems:
        print(f"warning: {problem}", file=sys.stderr)
    if not loaded:
        return _fail("no valid tasks", EXIT_INPUT_ERROR)
    agent = _make_agent(config)
    os.makedirs(config.output_dir, exist_ok=True)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            logs = list(pool.map(lambda t: _run_one(t, agent, config), loaded))
    else:
        logs = [_run_one(task, agent, config) for task in loaded]
    summary = metrics.aggregate(logs)
    report_text = metrics.render_report(summary, "text-table")
    report_json = metrics.render_report(summary, "machine-readable")
    with open(os.path.join(config.output_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(report_text)
    with open(os.path.join(config.output_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report_json)
    print(report_text)
    return EXIT_OK


def cmd_report(args) -> int:
    logs = []
    try:
        names = sorted(os.listdir(args.logs))
    except OSError as exc:
        return _fail(f"cannot list {args.logs}: {exc}", EXIT_INPUT_ERROR)
    for name in names:
        if name.startswith("session_") and name.endswith(".jsonl"):
            logs.append(environment.load_session_log(os.path.join(args.logs, name)))
    if not logs:
        return _fail(f"no session logs under {args.logs}", EXIT_INPUT_ERROR)
    summary = metrics.aggregate(logs)
    fmt = "machine-readable" if args.json else "text-table"
    print(metrics.render_report(summary, fmt), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geobuild", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exec", help="execute a construction program")
    p.add_argument("program")
    p.add_argument("--render", metavar="SVG", help="also write an image")
    p.set_defaults(func=cmd_exec)

    p = sub.add_parser("render", help="execute and render a program")
    p.add_argument("program")
    p.add_argument("output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="verify a program against a task")
    p.add_argument("--task", required=True, help="task file (JSONL)")
    p.add_argument("--task-id", help="task id (default: first)")
    p.add_argument("program")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("validate-tasks", help="check a task file")
    p.add_argument("tasks")
    p.set_defaults(func=cmd_validate_tasks)

    p = sub.add_parser("run", help="run a benchmark over a task file")
    p.add_argument("--tasks", required=True)
    p.add_argument("--agent", required=True, help="replay:SCRIPT.json or remote:URL")
    p.add_argument("--model", help="model name for remote agents")
    p.add_argument("--budget", type=int, default=environment.DEFAULT_BUDGET)
    vision = p.add_mutually_exclusive_group()
    vision.add_argument("--vision", dest="vision", action="store_true")
    vision.add_argument("--no-vision", dest="vision", action="store_false")
    p.set_defaults(vision=False)
    p.add_argument("--out", default="runs")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="aggregate session logs into a report")
    p.add_argument("--logs", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
