"""Structured problem classes: generators paired with independent oracles."""

from __future__ import annotations

from typing import Any

from .base import ClassId, ClassInstance, SemanticProxy, SizeError
from . import covering, flows, knapsack, linear, scheduling, tsp

# per-class default size keys, overridable from the CLI / config
DEFAULT_SIZES: dict[ClassId, dict[str, int]] = {
    ClassId.LINEAR: {"n_vars": 3},
    ClassId.KNAPSACK: {"n_items": 8},
    ClassId.MDKNAPSACK: {"n_items": 7, "dims": 2},
    ClassId.SET_COVER: {"universe": 6},
    ClassId.BIN_PACKING: {"n_items": 5},
    ClassId.TSP: {"n_cities": 5},
    ClassId.SHIFT_SCHEDULING: {"periods": 6},
    ClassId.TRANSPORTATION: {"sources": 3, "sinks": 3},
    ClassId.MAX_FLOW: {"n_nodes": 5},
    ClassId.MIN_COST_FLOW: {"n_nodes": 5},
}


def generate_class_instance(
    class_id: ClassId | str, seed: int, sizes: dict[str, int] | None = None
) -> ClassInstance:
    """Generate one instance: MILP formulation, semantic proxy, certified value."""
    cid = ClassId(class_id)
    params = dict(DEFAULT_SIZES[cid])
    params.update(sizes or {})
    if cid is ClassId.LINEAR:
        return linear.generate_linear(params["n_vars"], seed)
    if cid is ClassId.KNAPSACK:
        return knapsack.generate_knapsack(params["n_items"], seed)
    if cid is ClassId.MDKNAPSACK:
        return knapsack.generate_mdknapsack(params["n_items"], params["dims"], seed)
    if cid is ClassId.SET_COVER:
        return covering.generate_set_cover(params["universe"], seed)
    if cid is ClassId.BIN_PACKING:
        return covering.generate_bin_packing(params["n_items"], seed)
    if cid is ClassId.TSP:
        return tsp.generate_tsp(params["n_cities"], seed)
    if cid is ClassId.SHIFT_SCHEDULING:
        return scheduling.generate_shift_scheduling(params["periods"], seed)
    if cid is ClassId.TRANSPORTATION:
        return flows.generate_transportation(params["sources"], params["sinks"], seed)
    if cid is ClassId.MAX_FLOW:
        return flows.generate_max_flow(params["n_nodes"], seed)
    if cid is ClassId.MIN_COST_FLOW:
        return flows.generate_min_cost_flow(params["n_nodes"], seed)
    raise ValueError(f"unknown class {class_id!r}")


def class_oracle(class_id: ClassId | str, data: Any) -> float:
    """Exact optimum by the class's independent combinatorial method."""
    cid = ClassId(class_id)
    if cid is ClassId.LINEAR:
        return linear.oracle(data)
    if cid in (ClassId.KNAPSACK, ClassId.MDKNAPSACK):
        return knapsack.oracle(data)
    if cid is ClassId.SET_COVER:
        return covering.set_cover_oracle(data)
    if cid is ClassId.BIN_PACKING:
        return covering.bin_packing_oracle(data)
    if cid is ClassId.TSP:
        return tsp.oracle(data)
    if cid is ClassId.SHIFT_SCHEDULING:
        return scheduling.oracle(data)
    if cid is ClassId.TRANSPORTATION:
        return flows.transportation_oracle(data)
    if cid is ClassId.MAX_FLOW:
        return flows.max_flow_oracle(data)
    if cid is ClassId.MIN_COST_FLOW:
        return flows.min_cost_flow_oracle(data)
    raise ValueError(f"unknown class {class_id!r}")


STRUCTURED_CLASSES: tuple[ClassId, ...] = tuple(
    c for c in ClassId if c is not ClassId.LINEAR
)

__all__ = [
    "ClassId",
    "ClassInstance",
    "DEFAULT_SIZES",
    "STRUCTURED_CLASSES",
    "SemanticProxy",
    "SizeError",
    "class_oracle",
    "generate_class_instance",
]
