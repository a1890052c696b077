"""Oracle-checkable random linear class: all-integer, bounded, small.

Used where a grid-enumeration check must be possible; the open-ended linear
instances of the batch pipeline come from the sampler directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import Problem, Sense
from ..sampler import (
    SamplerConfig,
    StructureSpec,
    build_symbolic,
    default_ranges,
    sample_coefficients,
    sample_structure,
)
from ..solver import Status, brute_force, solve_milp
from . import labels
from .base import ClassId, ClassInstance, SemanticProxy, SizeError

MAX_VARS = 6


@dataclass(frozen=True)
class LinearData:
    problem: Problem


def generate_linear(n_vars: int, seed: int) -> ClassInstance:
    if not 2 <= n_vars <= MAX_VARS:
        raise SizeError(f"variable count {n_vars} outside [2, {MAX_VARS}]")
    config = SamplerConfig(n_range=(n_vars, n_vars), m_range=(2, 4))
    rng = np.random.default_rng([seed, 48])
    for attempt in range(config.retry_budget):
        structure_seed = int(rng.integers(0, 2**31))
        spec = sample_structure(structure_seed, config)
        spec = StructureSpec(
            **{
                **spec.__dict__,
                "integrality": (True,) * spec.n,
                "has_lower": (False,) * spec.n,
                "has_upper": (True,) * spec.n,
            }
        )
        sym = build_symbolic(spec)
        ranges = default_ranges(sym)
        ranges.ranges.update(
            {name: (4.0, 10.0, True) for name in sym.parameters if name.startswith("u_")}
        )
        ranges.ranges.update(
            {name: (10.0, 60.0, True) for name in sym.parameters if name.startswith("b_")}
        )
        problem = sample_coefficients(sym, ranges, int(rng.integers(0, 2**31)))
        outcome = solve_milp(problem)
        if outcome.status is not Status.OPTIMAL:
            continue
        names = labels.pick(labels.PRODUCTS, spec.n, rng)
        proxy = SemanticProxy(
            class_tag=ClassId.LINEAR.value,
            entity_labels=names,
            roles={name: "activity level to choose" for name in names},
        )
        return ClassInstance(ClassId.LINEAR, problem, proxy, outcome.value, LinearData(problem))
    raise RuntimeError(f"no feasible linear instance after {config.retry_budget} draws")


def oracle(data: LinearData) -> float:
    """Exact optimum by full lattice enumeration (the class keeps instances
    all-integer and box-bounded so this is always possible)."""
    outcome = brute_force(data.problem)
    if outcome.status is not Status.OPTIMAL:
        raise ValueError("linear oracle called on an instance without an optimum")
    return outcome.value
