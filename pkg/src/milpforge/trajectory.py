"""Assembly and export of verified instruction-output pairs.

A run becomes training data only when at least one language track's final
value matches the stored ground truth; code pairs are kept for exactly the
matching tags, and every successful debugging transition is captured as its
own sample.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .workflow import OK, TAGS, WorkflowTrace

SCHEMA_VERSION = 1

_KIND_ORDER = {"DA": 0, "FA": 1, "CA": 2}


@dataclass(frozen=True)
class TrajectoryPair:
    kind: str   # DA | FA | CA
    instruction: tuple[tuple[str, str], ...]
    output: tuple[tuple[str, str], ...]
    tag: str | None = None

    def __post_init__(self) -> None:
        names = tuple(name for name, _ in self.instruction)
        out_names = tuple(name for name, _ in self.output)
        expected = {
            "DA": (("problem_description", "decomposition_prompt"),
                   ("reasoning_step_1", "extracted_components")),
            "FA": (("problem_description", "extracted_components", "formulation_prompt"),
                   ("reasoning_step_2", "math_formulation")),
            "CA": (("problem_description", "math_formulation", "coding_prompt"),
                   ("reasoning_step_3", "code")),
        }
        if self.kind not in expected:
            raise ValueError(f"bad pair kind {self.kind!r}")
        want_in, want_out = expected[self.kind]
        if names != want_in or out_names != want_out:
            raise ValueError(f"{self.kind} pair has parts {names} -> {out_names}")
        if (self.kind == "CA") != (self.tag is not None):
            raise ValueError("exactly the CA pairs carry a language tag")

    def instruction_text(self) -> str:
        return "\n\n".join(text for _, text in self.instruction)

    def output_text(self) -> str:
        return "\n\n".join(text for _, text in self.output)


@dataclass(frozen=True)
class DebugSample:
    tag: str
    error_context: str
    fixed_code: str


@dataclass(frozen=True)
class Trajectory:
    instance_id: str
    pair_da: TrajectoryPair
    pair_fa: TrajectoryPair
    pairs_ca: tuple[TrajectoryPair, ...]
    ground_truth: float
    matched_tags: frozenset[str]
    debug_samples: tuple[DebugSample, ...] = ()

    def __post_init__(self) -> None:
        if not self.matched_tags:
            raise ValueError("stored trajectories need at least one matched tag")


def _reasoning(response: str) -> str:
    """Everything the backend wrote before its final fenced block."""
    cut = response.rfind("```")
    opener = response.rfind("```", 0, cut)
    if cut < 0 or opener < 0:
        return response.strip()
    return response[:opener].strip()


def assemble(
    trace: WorkflowTrace, ground_truth: float, eps: float, instance_id: str = ""
) -> Trajectory | None:
    """Build a trajectory when some track's final ok value matches the label."""
    if trace.decomposition is None or trace.formulation is None:
        return None
    matched = set()
    for tag, track in trace.tracks.items():
        final = track.final_result
        if final is not None and final.status == OK and abs(final.value - ground_truth) <= eps:
            matched.add(tag)
    if not matched:
        return None

    pair_da = TrajectoryPair(
        kind="DA",
        instruction=(
            ("problem_description", trace.description),
            ("decomposition_prompt", trace.decomposition.prompt),
        ),
        output=(
            ("reasoning_step_1", _reasoning(trace.decomposition.response)),
            ("extracted_components", trace.decomposition.extracted),
        ),
    )
    pair_fa = TrajectoryPair(
        kind="FA",
        instruction=(
            ("problem_description", trace.description),
            ("extracted_components", trace.decomposition.extracted),
            ("formulation_prompt", trace.formulation.prompt),
        ),
        output=(
            ("reasoning_step_2", _reasoning(trace.formulation.response)),
            ("math_formulation", trace.formulation.extracted),
        ),
    )
    pairs_ca = []
    for tag in TAGS:
        if tag not in matched:
            continue
        track = trace.tracks[tag]
        if track.coding is None:
            continue
        pairs_ca.append(
            TrajectoryPair(
                kind="CA",
                instruction=(
                    ("problem_description", trace.description),
                    ("math_formulation", trace.formulation.extracted),
                    ("coding_prompt", track.coding.prompt),
                ),
                output=(
                    ("reasoning_step_3", _reasoning(track.coding.response)),
                    ("code", track.code_versions[-1] if track.code_versions else track.coding.extracted),
                ),
                tag=tag,
            )
        )

    debug_samples = []
    for tag in TAGS:
        track = trace.tracks.get(tag)
        if track is None or track.final_result is None:
            continue
        if track.final_result.status != OK or track.debug_rounds_used == 0:
            continue
        for k, result in enumerate(track.results[:-1]):
            if result.status == OK or k + 1 >= len(track.code_versions):
                continue
            context = (
                f"failing code:\n{track.code_versions[k]}\n"
                f"error ({result.status}): {result.message}"
            )
            debug_samples.append(DebugSample(tag, context, track.code_versions[k + 1]))

    return Trajectory(
        instance_id=instance_id,
        pair_da=pair_da,
        pair_fa=pair_fa,
        pairs_ca=tuple(pairs_ca),
        ground_truth=ground_truth,
        matched_tags=frozenset(matched),
        debug_samples=tuple(debug_samples),
    )


def _records(trajectory: Trajectory) -> list[dict]:
    records = []
    for pair in (trajectory.pair_da, trajectory.pair_fa, *trajectory.pairs_ca):
        record = {
            "schema_version": SCHEMA_VERSION,
            "instance_id": trajectory.instance_id,
            "kind": pair.kind,
            "instruction": pair.instruction_text(),
            "output": pair.output_text(),
        }
        if pair.tag is not None:
            record["tag"] = pair.tag
        records.append(record)
    return records


def export_sft(trajectories: list[Trajectory], path: str | Path) -> int:
    """Write line-JSON SFT records, deterministically ordered; returns the count."""
    records = []
    for trajectory in trajectories:
        records.extend(_records(trajectory))
    records.sort(
        key=lambda r: (
            r["instance_id"],
            _KIND_ORDER[r["kind"]],
            TAGS.index(r["tag"]) if "tag" in r else -1,
        )
    )
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    return len(records)


def read_sft(path: str | Path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out
