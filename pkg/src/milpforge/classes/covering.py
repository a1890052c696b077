"""Set cover and bin packing: generators and enumeration oracles."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..model import Constraint, LinearExpr, Problem, Relation, Sense, binary
from . import labels
from .base import ClassId, ClassInstance, SemanticProxy, SizeError

MAX_UNIVERSE = 10
MAX_SETS = 12
MAX_PACK_ITEMS = 8


@dataclass(frozen=True)
class SetCoverData:
    universe: int                      # elements 0..universe-1
    members: tuple[frozenset[int], ...]
    costs: tuple[float, ...]


@dataclass(frozen=True)
class BinPackingData:
    capacity: float
    sizes: tuple[float, ...]


def set_cover_problem(data: SetCoverData) -> Problem:
    s = len(data.members)
    cons = tuple(
        Constraint(
            LinearExpr(tuple((1.0, k) for k in range(s) if e in data.members[k])),
            Relation.GE,
            1.0,
            label=f"cover_{e + 1}",
        )
        for e in range(data.universe)
    )
    return Problem(
        sense=Sense.MIN,
        variables=tuple(binary(f"x{k + 1}") for k in range(s)),
        objective=LinearExpr(tuple((data.costs[k], k) for k in range(s))),
        constraints=cons,
        class_tag=ClassId.SET_COVER.value,
    )


def generate_set_cover(universe: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 2 <= universe <= MAX_UNIVERSE:
        raise SizeError(f"universe size {universe} outside [2, {MAX_UNIVERSE}]")
    rng = np.random.default_rng([seed, 41])
    n_sets = int(rng.integers(universe // 2 + 2, min(MAX_SETS, universe + 4) + 1))
    members = []
    for _ in range(n_sets):
        mask = rng.random(universe) < 0.4
        if not mask.any():
            mask[int(rng.integers(0, universe))] = True
        members.append(frozenset(int(e) for e in np.nonzero(mask)[0]))
    covered = frozenset().union(*members)
    for e in range(universe):
        if e not in covered:
            k = int(rng.integers(0, n_sets))
            members[k] = members[k] | {e}
    costs = tuple(float(rng.integers(1, 11)) for _ in range(n_sets))
    data = SetCoverData(universe, tuple(members), costs)
    problem = set_cover_problem(data)
    outcome = solve_milp(problem)
    names = labels.pick(labels.WORKERS, n_sets, rng)
    proxy = SemanticProxy(
        class_tag=ClassId.SET_COVER.value,
        entity_labels=names,
        roles={name: "selectable coverage option" for name in names},
    )
    return ClassInstance(ClassId.SET_COVER, problem, proxy, outcome.value, data)


def set_cover_oracle(data: SetCoverData) -> float:
    """Exact optimum by enumerating all combinations of sets."""
    s = len(data.members)
    if s > MAX_SETS:
        raise SizeError(f"oracle limited to {MAX_SETS} sets")
    everything = frozenset(range(data.universe))
    best = None
    for r in range(1, s + 1):
        for sub in combinations(range(s), r):
            if frozenset().union(*(data.members[k] for k in sub)) == everything:
                cost = sum(data.costs[k] for k in sub)
                if best is None or cost < best:
                    best = cost
    if best is None:
        raise ValueError("instance does not cover its universe")
    return best


def bin_packing_problem(data: BinPackingData) -> Problem:
    """Assignment formulation with symmetry breaking: item i only enters bins
    0..i, and bin b+1 opens only after bin b."""
    n = len(data.sizes)
    variables = [binary(f"y{b + 1}") for b in range(n)]
    x_index: dict[tuple[int, int], int] = {}
    for i in range(n):
        for b in range(i + 1):
            x_index[(i, b)] = len(variables)
            variables.append(binary(f"x{i + 1}_{b + 1}"))

    cons = []
    for i in range(n):
        cons.append(
            Constraint(
                LinearExpr(tuple((1.0, x_index[(i, b)]) for b in range(i + 1))),
                Relation.EQ,
                1.0,
                label=f"assign_{i + 1}",
            )
        )
    for b in range(n):
        terms = [(data.sizes[i], x_index[(i, b)]) for i in range(b, n)]
        terms.append((-data.capacity, b))
        cons.append(Constraint(LinearExpr(tuple(terms)), Relation.LE, 0.0, label=f"cap_{b + 1}"))
    for b in range(n - 1):
        cons.append(
            Constraint(
                LinearExpr(((1.0, b), (-1.0, b + 1))),
                Relation.GE,
                0.0,
                label=f"order_{b + 1}",
            )
        )
    return Problem(
        sense=Sense.MIN,
        variables=tuple(variables),
        objective=LinearExpr(tuple((1.0, b) for b in range(n))),
        constraints=tuple(cons),
        class_tag=ClassId.BIN_PACKING.value,
    )


def generate_bin_packing(n_items: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 2 <= n_items <= MAX_PACK_ITEMS:
        raise SizeError(f"item count {n_items} outside [2, {MAX_PACK_ITEMS}]")
    rng = np.random.default_rng([seed, 42])
    sizes = tuple(float(rng.integers(1, 10)) for _ in range(n_items))
    capacity = float(max(sizes) + int(rng.integers(0, 6)))
    data = BinPackingData(capacity, sizes)
    problem = bin_packing_problem(data)
    outcome = solve_milp(problem)
    names = labels.pick(labels.ITEMS, n_items, rng)
    proxy = SemanticProxy(
        class_tag=ClassId.BIN_PACKING.value,
        entity_labels=names,
        roles={name: "item to place into a container" for name in names},
    )
    return ClassInstance(ClassId.BIN_PACKING, problem, proxy, outcome.value, data)


def bin_packing_oracle(data: BinPackingData) -> float:
    """Exact minimum bin count by recursive assignment with pruning."""
    n = len(data.sizes)
    if n > MAX_PACK_ITEMS:
        raise SizeError(f"oracle limited to {MAX_PACK_ITEMS} items")
    order = sorted(range(n), key=lambda i: -data.sizes[i])
    best = n

    def place(k: int, loads: list[float]) -> None:
        nonlocal best
        if len(loads) >= best:
            return
        if k == n:
            best = len(loads)
            return
        size = data.sizes[order[k]]
        seen_loads = set()
        for b, load in enumerate(loads):
            if load + size <= data.capacity and load not in seen_loads:
                seen_loads.add(load)
                loads[b] += size
                place(k + 1, loads)
                loads[b] -= size
        loads.append(size)
        place(k + 1, loads)
        loads.pop()

    place(0, [])
    return float(best)
