"""Agent adapters: scripted replay for tests, and a generic remote
chat-completion client for live evaluation.

An agent is a callable (task, history) -> program source, where history
is the list of prior StepRecords.
"""

from __future__ import annotations

import base64
import json
import os
import re
from dataclasses import dataclass

import requests

_FENCE_RE = re.compile(r"```(?:[A-Za-z0-9_+-]*\n)?(.*?)```", re.DOTALL)

#: Default system prompt: the DSL reference shipped to remote agents.
DSL_REFERENCE = """\
You are a geometry construction agent. Emit programs in a construction DSL,
one command per line, in the form:

    command : inputs -> outputs

Commands: point (coordinates, or sample on a line/circle), line, segment,
ray, circle (center + point or radius), angle, const, midpoint,
line_bisector, angular_bisector, parallel_line, orthogonal_line, intersect,
rotate, incenter, circumcenter, incircle, circumcircle, distance, sum,
minus, product, ratio.

Numeric inputs may be expressions using + - * / ( ) and sin/cos/tan with
NO spaces, e.g. 100*cos(45°). Angles default to degrees; suffixes °, deg,
rad, r are accepted.

Rules: define before use; one definition per label; no polygon command;
construct, don't assert; use expressions for precision.

Reply with exactly one fenced code block containing the full program.
"""


def extract_code_block(text: str) -> str:
    """First fenced code block of a reply, or empty string."""
    m = _FENCE_RE.search(text or "")
    return m.group(1).strip() if m else ""


class ReplayAgent:
    """Replays scripted programs; repeats the last one when exhausted."""

    def __init__(self, programs_by_task: dict[str, list[str]]):
        self.programs_by_task = programs_by_task

    @classmethod
    def from_file(cls, path) -> "ReplayAgent":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls({str(k): list(v) for k, v in data.items()})

    def __call__(self, task, history) -> str:
        scripts = self.programs_by_task.get(task.id)
        if not scripts:
            return ""
        index = min(len(history), len(scripts) - 1)
        return scripts[index]


@dataclass
class RemoteConfig:
    endpoint: str
    model: str
    token_env: str = "GEOBUILD_API_TOKEN"
    timeout: float = 120.0
    max_history: int = 10


class RemoteAgent:
    """Chat-completion client over HTTP.

    Builds a prompt from the DSL reference, the problem text, and the
    feedback history; the first fenced code block of the reply is the
    program. Tokens come from an environment variable and never reach
    the logs.
    """

    def __init__(self, config: RemoteConfig, vision: bool = False, session=None):
        self.config = config
        self.vision = vision
        self.http = session or requests.Session()

    def _messages(self, task, history) -> list[dict]:
        messages: list[dict] = [{"role": "system", "content": DSL_REFERENCE}]
        messages.append({"role": "user", "content": f"Problem:\n{task.problem_text}"})
        for record in history[-self.config.max_history :]:
            messages.append({"role": "assistant", "content": f"```\n{record.program_source}\n```"})
            content: list | str = record.feedback.as_text()
            if self.vision and record.image_path and os.path.exists(record.image_path):
                with open(record.image_path, "rb") as fh:
                    payload = base64.b64encode(fh.read()).decode("ascii")
                content = [
                    {"type": "text", "text": record.feedback.as_text()},
                    {
                        "type": "image_url",
                        "image_url": {"url": f"data:image/svg+xml;base64,{payload}"},
                    },
                ]
            messages.append({"role": "user", "content": content})
        return messages

    def __call__(self, task, history) -> str:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.config.token_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {"model": self.config.model, "messages": self._messages(task, history)}
        response = self.http.post(
            self.config.endpoint, json=body, headers=headers, timeout=self.config.timeout
        )
        response.raise_for_status()
        data = response.json()
        text = data["choices"][0]["message"]["content"]
        return extract_code_block(text)
