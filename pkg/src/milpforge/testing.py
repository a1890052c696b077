"""Offline test doubles: a canned deterministic backend and a transcript
builder that mirrors the pipeline's exact ask sequence."""

from __future__ import annotations

import hashlib

from .gateway import request_key
from .workflow import TAGS, TAG_DISPLAY


def _payload(kind: str, key: str) -> str:
    stamp = hashlib.sha256(f"{kind}:{key}".encode()).hexdigest()[:10]
    return f"{kind} [{stamp}]"


def canned_response(kind: str, key: str) -> str:
    return (
        f"Working through the {kind} step by step.\n"
        f"```\n{_payload(kind, key)}\n```"
    )


class CannedBackend:
    """Answers every request deterministically with a fenced payload derived
    from the request key. Lets the pipeline run with no transcript at all."""

    def __init__(self):
        self.calls = 0

    def complete(self, exchange, key: str | None = None):
        from .gateway import CompletionRecord

        self.calls += 1
        return CompletionRecord(canned_response("stage", key or "none"))


def pipeline_requests(description: str, tags: tuple[str, ...] = TAGS) -> list[tuple[str, dict]]:
    """The (template id, bindings) sequence run_pipeline sends for one
    problem when no debugging round fires."""
    steps: list[tuple[str, dict]] = []
    b1 = {"description": description}
    steps.append(("decomposition_agent", b1))
    draft = _payload("components-draft", request_key("decomposition_agent", b1))
    b2 = {"description": description, "previous_components": draft}
    steps.append(("decomposition_verifier", b2))
    components = _payload("components", request_key("decomposition_verifier", b2))
    b3 = {"description": description, "components": components}
    steps.append(("formulation_agent", b3))
    draft_f = _payload("formulation-draft", request_key("formulation_agent", b3))
    b4 = {**b3, "previous_formulation": draft_f}
    steps.append(("formulation_verifier", b4))
    formulation = _payload("formulation", request_key("formulation_verifier", b4))
    for tag in tags:
        b5 = {
            "solver": TAG_DISPLAY[tag],
            "description": description,
            "components": components,
            "formulation": formulation,
        }
        steps.append(("programmer", b5))
    return steps


_STEP_KINDS = {
    "decomposition_agent": "components-draft",
    "decomposition_verifier": "components",
    "formulation_agent": "formulation-draft",
    "formulation_verifier": "formulation",
    "programmer": "code",
}


def build_replay_transcript(descriptions: list[str], tags: tuple[str, ...] = TAGS) -> list[dict]:
    """Replay entries matching the pipeline's exact request hashes."""
    entries: list[dict] = []
    for description in descriptions:
        for template_id, bindings in pipeline_requests(description, tags):
            key = request_key(template_id, bindings)
            kind = _STEP_KINDS[template_id]
            entries.append(
                {"request_hash": key, "response": canned_response(kind, key)}
            )
    return entries
