"""Traveling salesman: MTZ formulation and permutation-enumeration oracle.

Subtour elimination uses the Miller-Tucker-Zemlin ordering variables, which
keeps the constraint count polynomial at desk scale: city 1 is the depot and
u_i (i >= 2) carries the visit position, so any directed cycle avoiding the
depot forces an impossible strictly increasing chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from ..model import (
    Constraint,
    DecisionVariable,
    LinearExpr,
    Problem,
    Relation,
    Sense,
    binary,
)
from . import labels
from .base import ClassId, ClassInstance, SemanticProxy, SizeError

MAX_CITIES = 9


@dataclass(frozen=True)
class TspData:
    dists: tuple[tuple[float, ...], ...]  # full matrix, zero diagonal

    @property
    def n(self) -> int:
        return len(self.dists)


def tsp_problem(data: TspData) -> Problem:
    n = data.n
    variables: list[DecisionVariable] = []
    arc: dict[tuple[int, int], int] = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                arc[(i, j)] = len(variables)
                variables.append(binary(f"x{i + 1}_{j + 1}"))
    u_index: dict[int, int] = {}
    for i in range(1, n):
        u_index[i] = len(variables)
        variables.append(DecisionVariable(f"u{i + 1}", 2.0, float(n)))

    cons: list[Constraint] = []
    for i in range(n):
        cons.append(
            Constraint(
                LinearExpr(tuple((1.0, arc[(i, j)]) for j in range(n) if j != i)),
                Relation.EQ,
                1.0,
                label=f"leave_{i + 1}",
            )
        )
    for j in range(n):
        cons.append(
            Constraint(
                LinearExpr(tuple((1.0, arc[(i, j)]) for i in range(n) if i != j)),
                Relation.EQ,
                1.0,
                label=f"enter_{j + 1}",
            )
        )
    # u_i - u_j + (n-1) x_ij <= n - 2 for i, j >= 2
    for i in range(1, n):
        for j in range(1, n):
            if i != j:
                cons.append(
                    Constraint(
                        LinearExpr(
                            (
                                (1.0, u_index[i]),
                                (-1.0, u_index[j]),
                                (float(n - 1), arc[(i, j)]),
                            )
                        ),
                        Relation.LE,
                        float(n - 2),
                        label=f"order_{i + 1}_{j + 1}",
                    )
                )
    objective = LinearExpr(
        tuple(
            (data.dists[i][j], arc[(i, j)])
            for i in range(n)
            for j in range(n)
            if i != j and data.dists[i][j] != 0.0
        )
    )
    return Problem(
        sense=Sense.MIN,
        variables=tuple(variables),
        objective=objective,
        constraints=tuple(cons),
        class_tag=ClassId.TSP.value,
    )


def decode_tour(data: TspData, point: tuple[float, ...]) -> list[int]:
    """Follow the selected arcs from the depot; raises if not a single cycle."""
    n = data.n
    succ: dict[int, int] = {}
    k = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                if point[k] > 0.5:
                    if i in succ:
                        raise ValueError(f"city {i} has two outgoing arcs")
                    succ[i] = j
                k += 1
    tour = [0]
    cur = 0
    for _ in range(n):
        if cur not in succ:
            raise ValueError(f"city {cur} has no outgoing arc")
        cur = succ[cur]
        tour.append(cur)
    if cur != 0 or len(set(tour[:-1])) != n:
        raise ValueError("selected arcs do not form one Hamiltonian cycle")
    return tour


def generate_tsp(n_cities: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 3 <= n_cities <= MAX_CITIES:
        raise SizeError(f"city count {n_cities} outside [3, {MAX_CITIES}]")
    rng = np.random.default_rng([seed, 43])
    d = np.zeros((n_cities, n_cities))
    for i in range(n_cities):
        for j in range(i + 1, n_cities):
            d[i, j] = d[j, i] = float(rng.integers(5, 41))
    data = TspData(tuple(tuple(row) for row in d))
    problem = tsp_problem(data)
    outcome = solve_milp(problem)
    names = labels.pick(labels.CITIES, n_cities, rng)
    proxy = SemanticProxy(
        class_tag=ClassId.TSP.value,
        entity_labels=names,
        roles={name: "location to visit exactly once" for name in names},
    )
    return ClassInstance(ClassId.TSP, problem, proxy, outcome.value, data)


def oracle(data: TspData) -> float:
    """Exact tour length by enumerating all permutations from the depot."""
    n = data.n
    if n > MAX_CITIES:
        raise SizeError(f"oracle limited to {MAX_CITIES} cities")
    best = None
    for perm in permutations(range(1, n)):
        cost = data.dists[0][perm[0]]
        for a, b in zip(perm, perm[1:]):
            cost += data.dists[a][b]
        cost += data.dists[perm[-1]][0]
        if best is None or cost < best:
            best = cost
    return float(best)
