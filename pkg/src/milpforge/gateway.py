"""Chat-backend abstraction, prompt library, fenced-output parsing, repair loops.

The prompt library ships one file per template under a versioned directory;
bodies are substituted by slot name only (never str.format, so literal braces
in prompt text can never break rendering). Replay backends match requests by
a hash of (template id, normalized bindings) so cosmetic changes to prompt
formatting do not invalidate recorded transcripts.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

PROMPT_DIR = Path(__file__).parent / "prompts" / "v1"
_SLOT = re.compile(r"\{([a-z_]+)\}")

DEFAULT_TEMPERATURE = 0.7
DEFAULT_SEED = 0

# templates whose body omits an explicit step list
PARTIALLY_SPECIFIED = frozenset({"formulation_verifier"})


class GatewayError(Exception):
    pass


class UnknownTemplateError(GatewayError):
    pass


class MissingBindingError(GatewayError):
    def __init__(self, template_id: str, names: set[str]):
        super().__init__(f"{template_id}: missing bindings {sorted(names)}")
        self.names = frozenset(names)


class ExtractionError(GatewayError):
    """No fenced block in the response."""


class TransportError(GatewayError):
    pass


class ReplayMismatchError(GatewayError):
    def __init__(self, expected: str, actual: str):
        super().__init__(f"replay expected request {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class ReplayExhaustedError(GatewayError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    body: str
    required_slots: frozenset[str]

    def render(self, bindings: dict[str, str]) -> str:
        missing = self.required_slots - set(bindings)
        if missing:
            raise MissingBindingError(self.id, missing)
        return _SLOT.sub(
            lambda m: str(bindings[m.group(1)]) if m.group(1) in bindings else m.group(0),
            self.body,
        )


def load_prompt_library(directory: Path = PROMPT_DIR) -> dict[str, PromptTemplate]:
    library: dict[str, PromptTemplate] = {}
    for path in sorted(directory.glob("*.txt")):
        body = path.read_text(encoding="utf-8")
        slots = frozenset(_SLOT.findall(body))
        library[path.stem] = PromptTemplate(path.stem, body, slots)
    return library


_LIBRARY: dict[str, PromptTemplate] | None = None


def prompt_library() -> dict[str, PromptTemplate]:
    global _LIBRARY
    if _LIBRARY is None:
        _LIBRARY = load_prompt_library()
    return _LIBRARY


def render_prompt(template_id: str, bindings: dict[str, str]) -> str:
    lib = prompt_library()
    if template_id not in lib:
        raise UnknownTemplateError(template_id)
    return lib[template_id].render(bindings)


_FENCE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


def extract_fenced(response: str) -> str:
    """Content of the final triple-backtick block, language hint stripped."""
    blocks = _FENCE.findall(response)
    if not blocks:
        raise ExtractionError("no fenced block in response")
    return blocks[-1].rstrip("\n")


def request_key(template_id: str, bindings: dict[str, str]) -> str:
    """Stable hash of (template id, normalized bindings) for replay matching."""
    normalized = json.dumps(
        {"template": template_id, "bindings": {k: str(v) for k, v in sorted(bindings.items())}},
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class ChatExchange:
    messages: tuple[tuple[str, str], ...]   # (role, content)
    model_id: str = "offline"
    temperature: float = DEFAULT_TEMPERATURE
    seed: int | None = DEFAULT_SEED

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("exchange needs at least one message")
        for role, _ in self.messages:
            if role not in ("system", "user", "assistant"):
                raise ValueError(f"bad role {role!r}")


@dataclass
class CompletionRecord:
    text: str
    attempts: int = 1


class LiveBackend:
    """Chat-completions HTTP backend; credential comes from a named env var."""

    def __init__(
        self,
        endpoint: str,
        credential_env: str = "MILPFORGE_API_KEY",
        model_id: str = "teacher",
        max_attempts: int = 3,
        backoff_s: float = 0.5,
        transport: Callable[[dict], str] | None = None,
    ):
        self.endpoint = endpoint
        self.credential_env = credential_env
        self.model_id = model_id
        self.max_attempts = max_attempts
        self.backoff_s = backoff_s
        self._transport = transport or self._http_transport

    def _http_transport(self, payload: dict) -> str:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.credential_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        req = urllib.request.Request(
            self.endpoint, data=json.dumps(payload).encode("utf-8"), headers=headers
        )
        with urllib.request.urlopen(req, timeout=120) as resp:
            body = json.loads(resp.read().decode("utf-8"))
        return body["choices"][0]["message"]["content"]

    def complete(self, exchange: ChatExchange, key: str | None = None) -> CompletionRecord:
        payload = {
            "model": exchange.model_id if exchange.model_id != "offline" else self.model_id,
            "temperature": exchange.temperature,
            "messages": [{"role": r, "content": c} for r, c in exchange.messages],
        }
        if exchange.seed is not None:
            payload["seed"] = exchange.seed
        last: Exception | None = None
        for attempt in range(1, self.max_attempts + 1):
            try:
                return CompletionRecord(self._transport(payload), attempts=attempt)
            except Exception as exc:   # transport failures trigger backoff+retry
                last = exc
                if attempt < self.max_attempts:
                    time.sleep(self.backoff_s * (2 ** (attempt - 1)))
        raise TransportError(f"transport failed after {self.max_attempts} attempts: {last}")


class ReplayBackend:
    """Replays a recorded transcript; each request must match the next entry's hash."""

    def __init__(self, transcript: list[dict] | Path):
        if isinstance(transcript, (str, Path)):
            entries = []
            with open(transcript, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        entries.append(json.loads(line))
            self._entries = entries
        else:
            self._entries = list(transcript)
        self._cursor = 0

    def complete(self, exchange: ChatExchange, key: str | None = None) -> CompletionRecord:
        if self._cursor >= len(self._entries):
            raise ReplayExhaustedError(
                f"transcript exhausted after {len(self._entries)} entries"
            )
        entry = self._entries[self._cursor]
        expected = entry.get("request_hash")
        if key is not None and expected is not None and key != expected:
            raise ReplayMismatchError(expected, key)
        self._cursor += 1
        return CompletionRecord(entry["response"])

    def assert_exhausted(self) -> None:
        if self._cursor != len(self._entries):
            raise AssertionError(
                f"replay transcript has {len(self._entries) - self._cursor} unused entries"
            )


def write_transcript(path: Path, entries: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")


def ask(
    backend,
    template_id: str,
    bindings: dict[str, str],
    *,
    system: str | None = None,
    temperature: float = DEFAULT_TEMPERATURE,
    seed: int | None = DEFAULT_SEED,
) -> CompletionRecord:
    """Render a library prompt and get one completion; replay-keyed by content."""
    prompt = render_prompt(template_id, bindings)
    messages: list[tuple[str, str]] = []
    if system:
        messages.append(("system", system))
    messages.append(("user", prompt))
    exchange = ChatExchange(
        messages=tuple(messages), temperature=temperature, seed=seed
    )
    return backend.complete(exchange, key=request_key(template_id, bindings))


@dataclass
class RepairResult:
    text: str
    passed: bool
    attempts: int
    missing: frozenset[str] = field(default_factory=frozenset)


REPAIR_TEMPLATES = {
    "variables": "variable_definition_debugging",
    "objective": "objective_definition_debugging",
    "constraint": "constraint_definition_debugging",
    "ranges": "parameter_range_debugging",
    "description": "symbolic_debugging",
}


def repair_loop(
    backend,
    kind: str,
    context: dict[str, str],
    missing: set[str],
    check: Callable[[str], set[str]],
    budget: int,
    current_text: str = "",
) -> RepairResult:
    """Iterate the debugging prompt for `kind` until `check` passes or budget ends.

    `context` must carry the non-repair slots of the debugging template;
    the missing-name slot is filled from the working set each round.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if kind not in REPAIR_TEMPLATES:
        raise ValueError(f"unknown repair kind {kind!r}")
    if not missing:
        return RepairResult(current_text, passed=True, attempts=0)

    template_id = REPAIR_TEMPLATES[kind]
    slots = prompt_library()[template_id].required_slots
    text = current_text
    working = set(missing)
    for attempt in range(1, budget + 1):
        bindings = dict(context)
        missing_text = "\n".join(sorted(working))
        for slot in ("missing_components", "missing_params"):
            if slot in slots:
                bindings[slot] = missing_text
        if "previous_description" in slots:
            bindings["previous_description"] = text
        record = ask(backend, template_id, bindings)
        text = extract_fenced(record.text)
        working = set(check(text))
        if not working:
            return RepairResult(text, passed=True, attempts=attempt)
    return RepairResult(text, passed=False, attempts=budget, missing=frozenset(working))
