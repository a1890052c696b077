"""Multi-stage NL-to-code pipeline with five-language consensus.

Stages: decompose (agent + one verifier round), formulate (same), then one
coding track per modeling-language tag. Each track executes its code through
an executor and enters a bounded debugging loop on failure; the per-tag
optimal values are then clustered and the majority cluster wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

from .gateway import ExtractionError, ask, extract_fenced, render_prompt

TAGS: tuple[str, ...] = ("pyomo", "gurobipy", "docplex", "cvxpy", "pyscipopt")

# display names used for the {solver} prompt slot
TAG_DISPLAY = {
    "pyomo": "Pyomo",
    "gurobipy": "Gurobipy",
    "docplex": "DOcplex",
    "cvxpy": "CVXPY",
    "pyscipopt": "PySCIPOpt",
}

DEFAULT_MAX_DEBUG_ROUNDS = 6
DEFAULT_CLUSTER_EPS = 1e-4
DEFAULT_EXEC_TIMEOUT_S = 60.0

OK = "ok"
RUNTIME_ERROR = "runtime_error"
INFEASIBLE_MODEL = "infeasible_model"
TIMEOUT = "timeout"

# demonstration snippet for the infeasibility prompt's {code_examples} slot
INFEASIBILITY_DEMO = """\
# A model was infeasible because two bounds contradicted each other:
#   model.add(x >= 10)
#   model.add(x <= 5)
# The fix re-read the description and kept the intended bound only:
#   model.add(x >= 10)
"""


@dataclass(frozen=True)
class ExecutorResult:
    status: str
    value: float | None = None
    message: str = ""

    def __post_init__(self) -> None:
        if self.status not in (OK, RUNTIME_ERROR, INFEASIBLE_MODEL, TIMEOUT):
            raise ValueError(f"bad executor status {self.status!r}")
        if self.status == OK and (self.value is None or not math.isfinite(self.value)):
            raise ValueError("ok results need a finite value")

    def to_dict(self) -> dict:
        return {"status": self.status, "value": self.value, "message": self.message}

    @classmethod
    def from_dict(cls, d: dict) -> "ExecutorResult":
        return cls(d["status"], d.get("value"), d.get("message", ""))


class Executor(Protocol):
    def run(self, tag: str, code: str, timeout_s: float) -> ExecutorResult: ...


@dataclass
class StageTrace:
    prompt: str
    response: str
    extracted: str

    def to_dict(self) -> dict:
        return {"prompt": self.prompt, "response": self.response, "extracted": self.extracted}

    @classmethod
    def from_dict(cls, d: dict) -> "StageTrace":
        return cls(d["prompt"], d["response"], d["extracted"])


@dataclass
class TagTrack:
    tag: str
    coding: StageTrace | None = None
    code_versions: list[str] = field(default_factory=list)
    results: list[ExecutorResult] = field(default_factory=list)
    debug_rounds_used: int = 0
    error: str = ""

    @property
    def final_result(self) -> ExecutorResult | None:
        return self.results[-1] if self.results else None

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "coding": self.coding.to_dict() if self.coding else None,
            "code_versions": list(self.code_versions),
            "results": [r.to_dict() for r in self.results],
            "debug_rounds_used": self.debug_rounds_used,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TagTrack":
        return cls(
            tag=d["tag"],
            coding=StageTrace.from_dict(d["coding"]) if d.get("coding") else None,
            code_versions=list(d.get("code_versions", [])),
            results=[ExecutorResult.from_dict(r) for r in d.get("results", [])],
            debug_rounds_used=d.get("debug_rounds_used", 0),
            error=d.get("error", ""),
        )


@dataclass
class ConsensusReport:
    clusters: list[tuple[float, tuple[str, ...]]]
    winner: float | None
    reason: str   # majority | tie_broken | no_valid_results

    def to_dict(self) -> dict:
        return {
            "clusters": [[rep, list(tags)] for rep, tags in self.clusters],
            "winner": self.winner,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConsensusReport":
        return cls(
            clusters=[(rep, tuple(tags)) for rep, tags in d.get("clusters", [])],
            winner=d.get("winner"),
            reason=d.get("reason", "no_valid_results"),
        )


@dataclass
class WorkflowTrace:
    description: str
    decomposition: StageTrace | None = None
    formulation: StageTrace | None = None
    tracks: dict[str, TagTrack] = field(default_factory=dict)
    consensus: ConsensusReport | None = None
    errors: list[str] = field(default_factory=list)
    backend_calls: int = 0
    max_debug_rounds: int = DEFAULT_MAX_DEBUG_ROUNDS

    @property
    def components(self) -> str | None:
        return self.decomposition.extracted if self.decomposition else None

    @property
    def formulation_text(self) -> str | None:
        return self.formulation.extracted if self.formulation else None

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "decomposition": self.decomposition.to_dict() if self.decomposition else None,
            "formulation": self.formulation.to_dict() if self.formulation else None,
            "tracks": {tag: t.to_dict() for tag, t in self.tracks.items()},
            "consensus": self.consensus.to_dict() if self.consensus else None,
            "errors": list(self.errors),
            "backend_calls": self.backend_calls,
            "max_debug_rounds": self.max_debug_rounds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WorkflowTrace":
        return cls(
            description=d["description"],
            decomposition=StageTrace.from_dict(d["decomposition"]) if d.get("decomposition") else None,
            formulation=StageTrace.from_dict(d["formulation"]) if d.get("formulation") else None,
            tracks={tag: TagTrack.from_dict(t) for tag, t in d.get("tracks", {}).items()},
            consensus=ConsensusReport.from_dict(d["consensus"]) if d.get("consensus") else None,
            errors=list(d.get("errors", [])),
            backend_calls=d.get("backend_calls", 0),
            max_debug_rounds=d.get("max_debug_rounds", DEFAULT_MAX_DEBUG_ROUNDS),
        )


class _Calls:
    """Counts backend calls and applies the single automatic re-ask on
    fenced-extraction failure."""

    def __init__(self, backend):
        self.backend = backend
        self.count = 0

    def ask_extracted(self, template_id: str, bindings: dict[str, str]) -> tuple[str, str]:
        record = ask(self.backend, template_id, bindings)
        self.count += 1
        try:
            return record.text, extract_fenced(record.text)
        except ExtractionError:
            record = ask(self.backend, template_id, bindings)
            self.count += 1
            return record.text, extract_fenced(record.text)


def decompose(backend, description: str, verifier_rounds: int = 1) -> StageTrace:
    """Decomposition prompt followed by verifier round(s) (default one)."""
    calls = _Calls(backend)
    return _decompose(calls, description, verifier_rounds)


def _decompose(calls: _Calls, description: str, verifier_rounds: int = 1) -> StageTrace:
    if verifier_rounds < 1:
        raise ValueError("at least one verifier round is required")
    prompt = render_prompt("decomposition_agent", {"description": description})
    response, current = calls.ask_extracted("decomposition_agent", {"description": description})
    for _ in range(verifier_rounds):
        response, current = calls.ask_extracted(
            "decomposition_verifier",
            {"description": description, "previous_components": current},
        )
    return StageTrace(prompt=prompt, response=response, extracted=current)


def formulate(backend, description: str, components: str, verifier_rounds: int = 1) -> StageTrace:
    calls = _Calls(backend)
    return _formulate(calls, description, components, verifier_rounds)


def _formulate(calls: _Calls, description: str, components: str, verifier_rounds: int = 1) -> StageTrace:
    if verifier_rounds < 1:
        raise ValueError("at least one verifier round is required")
    bindings = {"description": description, "components": components}
    prompt = render_prompt("formulation_agent", bindings)
    response, current = calls.ask_extracted("formulation_agent", bindings)
    for _ in range(verifier_rounds):
        response, current = calls.ask_extracted(
            "formulation_verifier", {**bindings, "previous_formulation": current}
        )
    return StageTrace(prompt=prompt, response=response, extracted=current)


def write_code(backend, description: str, components: str, formulation: str, tag: str) -> StageTrace:
    calls = _Calls(backend)
    return _write_code(calls, description, components, formulation, tag)


def _write_code(calls: _Calls, description: str, components: str, formulation: str, tag: str) -> StageTrace:
    bindings = {
        "solver": TAG_DISPLAY[tag],
        "description": description,
        "components": components,
        "formulation": formulation,
    }
    prompt = render_prompt("programmer", bindings)
    response, code = calls.ask_extracted("programmer", bindings)
    return StageTrace(prompt=prompt, response=response, extracted=code)


def execute_with_debug(
    executor: Executor,
    backend,
    description: str,
    code: str,
    tag: str,
    max_rounds: int = DEFAULT_MAX_DEBUG_ROUNDS,
    timeout_s: float = DEFAULT_EXEC_TIMEOUT_S,
    _calls: _Calls | None = None,
) -> TagTrack:
    """Run the code; on failure, iterate the matching debugging prompt."""
    if max_rounds < 0:
        raise ValueError("max_rounds must be nonnegative")
    calls = _calls or _Calls(backend)
    track = TagTrack(tag=tag, code_versions=[code])
    current = code
    for round_no in range(max_rounds + 1):
        result = executor.run(tag, current, timeout_s)
        track.results.append(result)
        if result.status == OK or result.status == TIMEOUT:
            break
        if round_no == max_rounds:
            break
        if result.status == RUNTIME_ERROR:
            _, current = calls.ask_extracted(
                "code_debugging",
                {
                    "solver": TAG_DISPLAY[tag],
                    "description": description,
                    "code_w_error": current,
                    "error_message": result.message,
                },
            )
        else:   # infeasible_model
            _, current = calls.ask_extracted(
                "infeasibility_debugging",
                {
                    "solver": TAG_DISPLAY[tag],
                    "description": description,
                    "code_w_error": current,
                    "code_examples": INFEASIBILITY_DEMO,
                },
            )
        track.code_versions.append(current)
        track.debug_rounds_used += 1
    return track


def majority_vote(
    results: dict[str, ExecutorResult], cluster_eps: float = DEFAULT_CLUSTER_EPS
) -> ConsensusReport:
    """Greedy value clustering in fixed tag order; largest cluster wins."""
    if cluster_eps <= 0:
        raise ValueError("cluster_eps must be positive")
    clusters: list[tuple[float, list[str]]] = []
    for tag in TAGS:
        result = results.get(tag)
        if result is None or result.status != OK:
            continue
        for rep, members in clusters:
            if abs(result.value - rep) <= cluster_eps:
                members.append(tag)
                break
        else:
            clusters.append((result.value, [tag]))
    frozen = [(rep, tuple(members)) for rep, members in clusters]
    if not frozen:
        return ConsensusReport(clusters=[], winner=None, reason="no_valid_results")
    best_size = max(len(members) for _, members in frozen)
    winners = [c for c in frozen if len(c[1]) == best_size]
    reason = "majority" if len(winners) == 1 else "tie_broken"
    return ConsensusReport(clusters=frozen, winner=winners[0][0], reason=reason)


def run_pipeline(
    backend,
    executors: dict[str, Executor],
    description: str,
    max_debug_rounds: int = DEFAULT_MAX_DEBUG_ROUNDS,
    cluster_eps: float = DEFAULT_CLUSTER_EPS,
    timeout_s: float = DEFAULT_EXEC_TIMEOUT_S,
    verifier_rounds: int = 1,
) -> tuple[float | None, WorkflowTrace]:
    """Compose all stages; stage failures are recorded, never raised."""
    missing = set(TAGS) - set(executors)
    if missing:
        raise ValueError(f"executors missing for tags: {sorted(missing)}")
    trace = WorkflowTrace(description=description, max_debug_rounds=max_debug_rounds)
    calls = _Calls(backend)

    if not description.strip():
        trace.errors.append("empty description")
        trace.consensus = ConsensusReport([], None, "no_valid_results")
        trace.backend_calls = calls.count
        return None, trace

    try:
        trace.decomposition = _decompose(calls, description, verifier_rounds)
    except Exception as exc:
        trace.errors.append(f"decompose: {exc}")
        trace.consensus = ConsensusReport([], None, "no_valid_results")
        trace.backend_calls = calls.count
        return None, trace

    try:
        trace.formulation = _formulate(calls, description, trace.components, verifier_rounds)
    except Exception as exc:
        trace.errors.append(f"formulate: {exc}")
        trace.consensus = ConsensusReport([], None, "no_valid_results")
        trace.backend_calls = calls.count
        return None, trace

    for tag in TAGS:
        try:
            coding = _write_code(
                calls, description, trace.components, trace.formulation_text, tag
            )
            track = execute_with_debug(
                executors[tag],
                backend,
                description,
                coding.extracted,
                tag,
                max_rounds=max_debug_rounds,
                timeout_s=timeout_s,
                _calls=calls,
            )
            track.coding = coding
        except Exception as exc:
            track = TagTrack(tag=tag, error=str(exc))
            trace.errors.append(f"{tag}: {exc}")
        trace.tracks[tag] = track

    final_results = {
        tag: track.final_result
        for tag, track in trace.tracks.items()
        if track.final_result is not None
    }
    trace.consensus = majority_vote(final_results, cluster_eps)
    trace.backend_calls = calls.count
    return trace.consensus.winner, trace
