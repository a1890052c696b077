"""Scoring and dataset auditing.

Correctness is an absolute-difference check whose tolerance depends on the
label's printed precision: labels with at most one decimal digit are treated
as rounded and get the loose tolerance, everything else the tight one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .model import Problem
from .solver import (
    LimitError,
    SolverConfig,
    Status,
    UnsupportedProblemError,
    solve_milp,
)

log = logging.getLogger(__name__)

EPS_TIGHT = 1e-4
EPS_ROUNDED = 1e-1

CONFIRMED = "confirmed"
MISMATCH = "mismatch"
UNSUPPORTED = "unsupported"


def label_decimals(label_text: str) -> int:
    """Digits after the decimal point in the label's textual form."""
    text = label_text.strip()
    try:
        float(text)
    except ValueError:
        raise ValueError(f"label {label_text!r} does not parse as a number")
    if "e" in text.lower():
        return 2   # scientific notation never counts as a rounded display form
    _, _, frac = text.partition(".")
    return len(frac)


def choose_epsilon(label_text: str) -> float:
    """Loose tolerance for labels printed with <= 1 decimal digit, else tight."""
    return EPS_ROUNDED if label_decimals(label_text) <= 1 else EPS_TIGHT


@dataclass(frozen=True)
class EvalRecord:
    instance_id: str
    predicted: float | None
    executed_ok: bool
    label_text: str

    def __post_init__(self) -> None:
        if self.predicted is not None and not self.executed_ok:
            raise ValueError("a prediction implies the code executed")
        float(self.label_text)   # must parse

    @property
    def label_value(self) -> float:
        return float(self.label_text)

    @property
    def label_decimals(self) -> int:
        return label_decimals(self.label_text)


def is_correct(record: EvalRecord) -> bool:
    if record.predicted is None:
        return False
    return abs(record.predicted - record.label_value) <= choose_epsilon(record.label_text)


@dataclass(frozen=True)
class RateReport:
    fraction: float
    per_instance: tuple[tuple[str, bool], ...]


def solution_accuracy(records: list[EvalRecord]) -> RateReport:
    if not records:
        raise ValueError("no records to score")
    flags = tuple((r.instance_id, is_correct(r)) for r in records)
    return RateReport(sum(ok for _, ok in flags) / len(flags), flags)


def execution_rate(records: list[EvalRecord]) -> RateReport:
    if not records:
        raise ValueError("no records to score")
    flags = tuple((r.instance_id, r.executed_ok) for r in records)
    return RateReport(sum(ok for _, ok in flags) / len(flags), flags)


@dataclass(frozen=True)
class AuditItem:
    instance_id: str
    description: str
    problem: Problem | None
    label_text: str


@dataclass(frozen=True)
class AuditFinding:
    instance_id: str
    stored_label: str
    solver_value: float | None
    verdict: str
    reason: str = ""


@dataclass(frozen=True)
class AuditReport:
    findings: tuple[AuditFinding, ...]
    confirmed: int
    mismatches: int
    unsupported: int

    @property
    def error_rate(self) -> float | None:
        checked = self.confirmed + self.mismatches
        return self.mismatches / checked if checked else None


def audit(items: list[AuditItem], cfg: SolverConfig | None = None) -> AuditReport:
    """Re-solve every machine-readable instance and compare to its stored label."""
    cfg = cfg or SolverConfig()
    findings: list[AuditFinding] = []
    confirmed = mismatches = unsupported = 0
    for item in items:
        if item.problem is None:
            findings.append(
                AuditFinding(item.instance_id, item.label_text, None, UNSUPPORTED,
                             reason="no machine-readable problem")
            )
            unsupported += 1
            continue
        try:
            outcome = solve_milp(item.problem, cfg)
        except (LimitError, UnsupportedProblemError) as exc:
            findings.append(
                AuditFinding(item.instance_id, item.label_text, None, UNSUPPORTED,
                             reason=str(exc))
            )
            unsupported += 1
            continue
        if outcome.status is not Status.OPTIMAL:
            findings.append(
                AuditFinding(item.instance_id, item.label_text, None, UNSUPPORTED,
                             reason=f"solver status {outcome.status.value}")
            )
            unsupported += 1
            continue
        eps = choose_epsilon(item.label_text)
        if abs(outcome.value - float(item.label_text)) <= eps:
            findings.append(
                AuditFinding(item.instance_id, item.label_text, outcome.value, CONFIRMED)
            )
            confirmed += 1
        else:
            findings.append(
                AuditFinding(item.instance_id, item.label_text, outcome.value, MISMATCH,
                             reason=f"|{outcome.value} - {item.label_text}| > {eps}")
            )
            mismatches += 1
            log.info("audit mismatch on %s: stored %s, solver %s",
                     item.instance_id, item.label_text, outcome.value)
    return AuditReport(tuple(findings), confirmed, mismatches, unsupported)
