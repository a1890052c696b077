"""Executor implementations: (tag, code, timeout) -> ExecutorResult.

Three bundled kinds: scripted results for tests, an oracle that ignores the
code and solves the paired problem with the internal engine, and a subprocess
bridge speaking the out-of-process line-JSON wire protocol
({tag, code, timeout_s} in, {status, value, message} out).
"""

from __future__ import annotations

import json
import subprocess
from collections import deque
from dataclasses import dataclass

from .model import Problem
from .solver import LimitError, SolverConfig, Status, solve_milp
from .workflow import (
    INFEASIBLE_MODEL,
    OK,
    RUNTIME_ERROR,
    TIMEOUT,
    ExecutorResult,
)


class ScriptedExecutor:
    """Pops pre-arranged results, per tag when given a mapping."""

    def __init__(self, script):
        if isinstance(script, dict):
            self._per_tag = {tag: deque(results) for tag, results in script.items()}
            self._queue = None
        else:
            self._per_tag = None
            self._queue = deque(script)

    def run(self, tag: str, code: str, timeout_s: float) -> ExecutorResult:
        queue = self._queue if self._queue is not None else self._per_tag.get(tag)
        if not queue:
            raise IndexError(f"scripted executor has no result left for {tag}")
        return queue.popleft()


class OracleExecutor:
    """Ignores the code entirely and solves the paired problem exactly.

    Lets the pipeline run offline with answers that are correct by
    construction; an optional per-call value shift makes a tag adversarial.
    """

    def __init__(self, problem: Problem, cfg: SolverConfig | None = None, shift: float = 0.0):
        self.problem = problem
        self.cfg = cfg or SolverConfig()
        self.shift = shift

    def run(self, tag: str, code: str, timeout_s: float) -> ExecutorResult:
        try:
            outcome = solve_milp(self.problem, self.cfg)
        except LimitError as exc:
            return ExecutorResult(RUNTIME_ERROR, message=f"solver limit: {exc}")
        if outcome.status is Status.OPTIMAL:
            return ExecutorResult(OK, value=outcome.value + self.shift)
        if outcome.status is Status.INFEASIBLE:
            return ExecutorResult(INFEASIBLE_MODEL, message="model infeasible")
        return ExecutorResult(RUNTIME_ERROR, message="model unbounded")


@dataclass
class BridgeExecutor:
    """Runs each request through an out-of-process runner.

    The runner command is spawned per request, receives one JSON line on
    stdin, and must answer one JSON line on stdout. A wall-clock grace beyond
    timeout_s guards against runners that ignore their own timeout.
    """

    command: tuple[str, ...]
    grace_s: float = 5.0

    def run(self, tag: str, code: str, timeout_s: float) -> ExecutorResult:
        request = json.dumps({"tag": tag, "code": code, "timeout_s": timeout_s})
        try:
            proc = subprocess.run(
                list(self.command),
                input=request + "\n",
                capture_output=True,
                text=True,
                timeout=timeout_s + self.grace_s,
            )
        except subprocess.TimeoutExpired:
            return ExecutorResult(TIMEOUT, message=f"runner exceeded {timeout_s}s + grace")
        except OSError as exc:
            return ExecutorResult(RUNTIME_ERROR, message=f"runner failed to start: {exc}")
        line = ""
        for candidate in proc.stdout.splitlines():
            if candidate.strip():
                line = candidate
        if not line:
            return ExecutorResult(
                RUNTIME_ERROR,
                message=f"runner produced no response (exit {proc.returncode}): {proc.stderr[:500]}",
            )
        try:
            payload = json.loads(line)
            return ExecutorResult(
                payload["status"], payload.get("value"), payload.get("message", "")
            )
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            return ExecutorResult(RUNTIME_ERROR, message=f"bad runner response: {exc}")
