"""End-to-end instance generation: structure to verified label to description.

Every emitted instance carries a label certified by the exact solver and a
fully instantiated natural-language description; infeasible and unbounded
draws are never emitted. Random linear instances go through the
structure/symbolic/coefficient path with a feasibility retry budget per
skeleton; structured classes are feasible by construction; the fixed-size
flow classes draw their data into the bundled description templates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .classes import ClassId, generate_class_instance
from .classes.flows import (
    FlowData,
    FlowEdge,
    edmonds_karp,
    max_flow_problem,
    min_cost_flow_problem,
)
from .model import Problem
from .nltext import SymbolicDescription, instantiate, render_table
from .sampler import (
    SamplerConfig,
    build_symbolic,
    default_ranges,
    draw_parameters,
    realize,
    sample_structure,
)
from .solver import SolverConfig, Status, solve_milp
from .teacher import describe_class_instance, describe_linear, load_template_library, template_variants
from .classes import labels as label_pools

log = logging.getLogger(__name__)

TABULAR_FRACTION = 0.4
TEMPLATED_CLASSES = (ClassId.MAX_FLOW, ClassId.MIN_COST_FLOW)


@dataclass(frozen=True)
class GeneratedInstance:
    instance_id: str
    class_tag: str
    problem: Problem
    label: float
    description: str
    seed: int


def _finish_description(desc: SymbolicDescription, values: dict[str, float], seed: int) -> str:
    text = instantiate(desc, values)
    if desc.table is not None:
        table_values = dict(values)
        table_values.setdefault("zero", 0.0)   # structural zeros in sparse grids
        text = text + "\n\n" + render_table(desc.table, table_values, seed)
    return text


def _generate_linear(seed: int, index: int, config: SamplerConfig) -> GeneratedInstance:
    rng = np.random.default_rng([seed, 900, index])
    for skeleton in range(20):
        spec = sample_structure(int(rng.integers(0, 2**31)), config)
        sym = build_symbolic(spec)
        ranges = default_ranges(sym)
        for _ in range(config.retry_budget):
            draw_seed = int(rng.integers(0, 2**31))
            values = draw_parameters(sym, ranges, draw_seed)
            problem = realize(sym, values)
            outcome = solve_milp(problem)
            if outcome.status is not Status.OPTIMAL:
                continue
            entities = label_pools.pick(label_pools.PRODUCTS, spec.n, rng)
            tabular = rng.random() < TABULAR_FRACTION
            desc = describe_linear(sym, entities, draw_seed, tabular=tabular)
            text = _finish_description(desc, values, draw_seed)
            return GeneratedInstance(
                instance_id=f"linear-{index:04d}",
                class_tag="linear",
                problem=problem,
                label=outcome.value,
                description=text,
                seed=draw_seed,
            )
        log.info("linear index %d: skeleton %d had no feasible draw", index, skeleton)
    raise RuntimeError(f"linear index {index}: no feasible instance after 20 skeletons")


_COMPLETE_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _generate_templated_flow(cid: ClassId, seed: int, index: int, library) -> GeneratedInstance:
    """Fixed 4-node complete topology so the template's parameter set applies."""
    rng = np.random.default_rng([seed, 901, index, 0 if cid is ClassId.MAX_FLOW else 1])
    with_costs = cid is ClassId.MIN_COST_FLOW
    edges = tuple(
        FlowEdge(u, v, int(rng.integers(1, 11)), int(rng.integers(1, 10)) if with_costs else 0)
        for u, v in _COMPLETE_EDGES
    )
    values: dict[str, float] = {}
    for e in edges:
        values[f"cap_{e.tail + 1}_{e.head + 1}"] = float(e.cap)
        if with_costs:
            values[f"cost_{e.tail + 1}_{e.head + 1}"] = float(e.cost)
    if with_costs:
        required = max(1, edmonds_karp(FlowData(4, edges)) // 2)
        values["req"] = float(required)
        data = FlowData(4, edges, required=required)
        problem = min_cost_flow_problem(data)
    else:
        data = FlowData(4, edges)
        problem = max_flow_problem(data)
    outcome = solve_milp(problem)
    variants = template_variants(library, cid.value)
    template = variants[int(rng.integers(0, len(variants)))]
    text = instantiate(template.body, values)
    return GeneratedInstance(
        instance_id=f"{cid.value}-{index:04d}",
        class_tag=cid.value,
        problem=problem,
        label=outcome.value,
        description=text,
        seed=seed,
    )


def generate_one(
    class_tag: str,
    seed: int,
    index: int,
    config: SamplerConfig | None = None,
    sizes: dict[str, int] | None = None,
) -> GeneratedInstance:
    """Deterministic in (class_tag, seed, index); emitted instances are always
    Optimal with a certified label."""
    config = config or SamplerConfig()
    cid = ClassId(class_tag)
    if cid is ClassId.LINEAR:
        return _generate_linear(seed, index, config)
    if cid in TEMPLATED_CLASSES:
        return _generate_templated_flow(cid, seed, index, load_template_library())
    child_seed = int(np.random.default_rng([seed, 902, index]).integers(0, 2**31))
    inst = generate_class_instance(cid, child_seed, sizes)
    if cid is ClassId.TRANSPORTATION and _fits_transportation_template(inst.data):
        text = _templated_transportation(inst.data, child_seed)
    else:
        desc, values = describe_class_instance(inst, child_seed)
        text = _finish_description(desc, values, child_seed)
    return GeneratedInstance(
        instance_id=f"{cid.value}-{index:04d}",
        class_tag=cid.value,
        problem=inst.problem,
        label=inst.value,
        description=text,
        seed=child_seed,
    )


def _fits_transportation_template(data) -> bool:
    return len(data.supplies) == 3 and len(data.demands) == 3


def _templated_transportation(data, seed: int) -> str:
    values: dict[str, float] = {}
    for i, s in enumerate(data.supplies):
        values[f"s_{i + 1}"] = float(s)
    for j, d in enumerate(data.demands):
        values[f"d_{j + 1}"] = float(d)
    for i in range(3):
        for j in range(3):
            values[f"c_{i + 1}_{j + 1}"] = float(data.costs[i][j])
    variants = template_variants(load_template_library(), ClassId.TRANSPORTATION.value)
    rng = np.random.default_rng([seed, 903])
    template = variants[int(rng.integers(0, len(variants)))]
    return instantiate(template.body, values)


def generate_batch(
    counts: dict[str, int],
    seed: int,
    config: SamplerConfig | None = None,
    sizes: dict[str, dict[str, int]] | None = None,
) -> list[GeneratedInstance]:
    out: list[GeneratedInstance] = []
    for class_tag in sorted(counts):
        for index in range(counts[class_tag]):
            out.append(
                generate_one(class_tag, seed, index, config, (sizes or {}).get(class_tag))
            )
    return out
