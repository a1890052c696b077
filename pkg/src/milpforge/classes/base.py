"""Shared types for the structured problem-class generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from ..model import Problem


class ClassId(str, Enum):
    LINEAR = "linear"
    KNAPSACK = "knapsack"
    MDKNAPSACK = "mdknapsack"
    SET_COVER = "set_cover"
    BIN_PACKING = "bin_packing"
    TSP = "tsp"
    SHIFT_SCHEDULING = "shift_scheduling"
    TRANSPORTATION = "transportation"
    MAX_FLOW = "max_flow"
    MIN_COST_FLOW = "min_cost_flow"


class SizeError(ValueError):
    """Requested instance size is outside the supported (oracle-checkable) range."""


@dataclass(frozen=True)
class SemanticProxy:
    """Interpretable stand-ins for the formal decision variables."""

    class_tag: str
    entity_labels: tuple[str, ...]
    roles: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(set(self.entity_labels)) != len(self.entity_labels):
            raise ValueError("entity labels must be unique")


@dataclass(frozen=True)
class ClassInstance:
    """One generated instance: MILP, proxy labels, certified optimum, raw data."""

    class_id: ClassId
    problem: Problem
    proxy: SemanticProxy
    value: float
    data: Any
