"""Solve outcomes and solver configuration."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LimitError(Exception):
    """A node, pivot, or time budget ran out; no status is implied."""


class UnsupportedProblemError(Exception):
    """The operation cannot handle this problem shape."""


@dataclass(frozen=True)
class SolveStats:
    pivots: int = 0
    nodes: int = 0


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    value: float | None = None
    point: tuple[float, ...] | None = None
    stats: SolveStats = SolveStats()

    def __post_init__(self) -> None:
        if self.status is Status.OPTIMAL:
            if self.value is None or self.point is None:
                raise ValueError("Optimal outcomes carry a value and a point")
        elif self.value is not None or self.point is not None:
            raise ValueError(f"{self.status.value} outcomes carry no value/point")


@dataclass(frozen=True)
class SolverConfig:
    lp_tol: float = 1e-9
    int_tol: float = 1e-6
    node_limit: int = 1_000_000
    time_limit: float | None = 30.0

    def __post_init__(self) -> None:
        if self.lp_tol <= 0 or self.int_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.node_limit <= 0:
            raise ValueError("node limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")
