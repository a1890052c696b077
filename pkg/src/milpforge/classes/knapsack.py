"""Knapsack and multidimensional knapsack: generators and subset-enumeration oracles."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..model import Constraint, LinearExpr, Problem, Relation, Sense, binary
from . import labels
from .base import ClassId, ClassInstance, SemanticProxy, SizeError

MAX_ITEMS = 15


@dataclass(frozen=True)
class KnapsackData:
    capacities: tuple[float, ...]            # one entry per weight dimension
    weights: tuple[tuple[float, ...], ...]   # weights[dim][item]
    values: tuple[float, ...]


def _formulate(data: KnapsackData, tag: str) -> Problem:
    n = len(data.values)
    cons = tuple(
        Constraint(
            LinearExpr(tuple((data.weights[d][i], i) for i in range(n))),
            Relation.LE,
            data.capacities[d],
            label=f"capacity_{d + 1}" if len(data.capacities) > 1 else "capacity",
        )
        for d in range(len(data.capacities))
    )
    return Problem(
        sense=Sense.MAX,
        variables=tuple(binary(f"x{i + 1}") for i in range(n)),
        objective=LinearExpr(tuple((data.values[i], i) for i in range(n))),
        constraints=cons,
        class_tag=tag,
    )


def _generate(class_id: ClassId, n_items: int, dims: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 2 <= n_items <= MAX_ITEMS:
        raise SizeError(f"item count {n_items} outside [2, {MAX_ITEMS}]")
    rng = np.random.default_rng([seed, hash(class_id.value) % (2**32)])
    weights = tuple(
        tuple(float(rng.integers(1, 10)) for _ in range(n_items)) for _ in range(dims)
    )
    values = tuple(float(rng.integers(5, 51)) for _ in range(n_items))
    capacities = tuple(
        float(max(max(w), int(sum(w) * 0.55))) for w in weights
    )
    data = KnapsackData(capacities, weights, values)
    problem = _formulate(data, class_id.value)
    outcome = solve_milp(problem)
    names = labels.pick(labels.ITEMS, n_items, rng)
    proxy = SemanticProxy(
        class_tag=class_id.value,
        entity_labels=names,
        roles={name: "candidate item to pack" for name in names},
    )
    return ClassInstance(class_id, problem, proxy, outcome.value, data)


def generate_knapsack(n_items: int, seed: int) -> ClassInstance:
    return _generate(ClassId.KNAPSACK, n_items, dims=1, seed=seed)


def generate_mdknapsack(n_items: int, dims: int, seed: int) -> ClassInstance:
    if not 2 <= dims <= 3:
        raise SizeError(f"dimension count {dims} outside [2, 3]")
    return _generate(ClassId.MDKNAPSACK, n_items, dims=dims, seed=seed)


def oracle(data: KnapsackData) -> float:
    """Exact optimum by enumerating all item subsets."""
    n = len(data.values)
    if n > MAX_ITEMS:
        raise SizeError(f"oracle limited to {MAX_ITEMS} items")
    best = 0.0
    items = range(n)
    for r in range(n + 1):
        for sub in combinations(items, r):
            if all(
                sum(data.weights[d][i] for i in sub) <= data.capacities[d]
                for d in range(len(data.capacities))
            ):
                value = sum(data.values[i] for i in sub)
                best = max(best, value)
    return best
