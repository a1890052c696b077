"""Network flow classes: max flow, min cost flow, transportation.

Node counts are fixed per instance (small), data is integral, and flow
variables are declared integer: the constraint matrices are totally
unimodular so this leaves the optimum unchanged while letting the solver
report bit-exact integer objectives. Oracles are classical combinatorial
algorithms: BFS augmenting paths for max flow, successive shortest paths
with Bellman-Ford for the cost-minimizing classes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..model import Constraint, LinearExpr, Problem, Relation, Sense, integer
from . import labels
from .base import ClassId, ClassInstance, SemanticProxy, SizeError

MAX_NODES = 6
MAX_SIDE = 4   # transportation sources/sinks


@dataclass(frozen=True)
class FlowEdge:
    tail: int
    head: int
    cap: int
    cost: int = 0


@dataclass(frozen=True)
class FlowData:
    n_nodes: int                      # node 0 = source, n_nodes-1 = sink
    edges: tuple[FlowEdge, ...]
    required: int = 0                 # min-cost-flow shipment; 0 for max flow


@dataclass(frozen=True)
class TransportationData:
    supplies: tuple[int, ...]
    demands: tuple[int, ...]
    costs: tuple[tuple[int, ...], ...]   # costs[source][sink]


def _conservation_rows(data: FlowData) -> list[Constraint]:
    rows = []
    for v in range(1, data.n_nodes - 1):
        terms = []
        for k, e in enumerate(data.edges):
            if e.head == v:
                terms.append((1.0, k))
            if e.tail == v:
                terms.append((-1.0, k))
        if terms:
            rows.append(
                Constraint(LinearExpr(tuple(terms)), Relation.EQ, 0.0, label=f"node_{v + 1}")
            )
    return rows


def max_flow_problem(data: FlowData) -> Problem:
    variables = tuple(
        integer(f"f{e.tail + 1}_{e.head + 1}", 0.0, float(e.cap)) for e in data.edges
    )
    source_terms = tuple(
        (1.0 if e.tail == 0 else -1.0, k)
        for k, e in enumerate(data.edges)
        if e.tail == 0 or e.head == 0
    )
    return Problem(
        sense=Sense.MAX,
        variables=variables,
        objective=LinearExpr(source_terms),
        constraints=tuple(_conservation_rows(data)),
        class_tag=ClassId.MAX_FLOW.value,
    )


def min_cost_flow_problem(data: FlowData) -> Problem:
    variables = tuple(
        integer(f"f{e.tail + 1}_{e.head + 1}", 0.0, float(e.cap)) for e in data.edges
    )
    source_terms = tuple(
        (1.0 if e.tail == 0 else -1.0, k)
        for k, e in enumerate(data.edges)
        if e.tail == 0 or e.head == 0
    )
    cons = [Constraint(LinearExpr(source_terms), Relation.EQ, float(data.required), label="ship")]
    cons.extend(_conservation_rows(data))
    return Problem(
        sense=Sense.MIN,
        variables=variables,
        objective=LinearExpr(
            tuple((float(e.cost), k) for k, e in enumerate(data.edges) if e.cost)
        ),
        constraints=tuple(cons),
        class_tag=ClassId.MIN_COST_FLOW.value,
    )


def transportation_problem(data: TransportationData) -> Problem:
    s, d = len(data.supplies), len(data.demands)
    variables = []
    for i in range(s):
        for j in range(d):
            cap = float(min(data.supplies[i], data.demands[j]))
            variables.append(integer(f"x{i + 1}_{j + 1}", 0.0, cap))
    cons = []
    for i in range(s):
        cons.append(
            Constraint(
                LinearExpr(tuple((1.0, i * d + j) for j in range(d))),
                Relation.EQ,
                float(data.supplies[i]),
                label=f"supply_{i + 1}",
            )
        )
    for j in range(d):
        cons.append(
            Constraint(
                LinearExpr(tuple((1.0, i * d + j) for i in range(s))),
                Relation.EQ,
                float(data.demands[j]),
                label=f"demand_{j + 1}",
            )
        )
    return Problem(
        sense=Sense.MIN,
        variables=tuple(variables),
        objective=LinearExpr(
            tuple(
                (float(data.costs[i][j]), i * d + j)
                for i in range(s)
                for j in range(d)
            )
        ),
        constraints=tuple(cons),
        class_tag=ClassId.TRANSPORTATION.value,
    )


def _random_network(rng: np.random.Generator, n_nodes: int, with_costs: bool) -> tuple[FlowEdge, ...]:
    """A layered DAG from source 0 to sink n-1 with a guaranteed chain."""
    edges: list[FlowEdge] = []
    seen = set()

    def add(u: int, v: int) -> None:
        if (u, v) in seen:
            return
        seen.add((u, v))
        cap = int(rng.integers(1, 11))
        cost = int(rng.integers(1, 10)) if with_costs else 0
        edges.append(FlowEdge(u, v, cap, cost))

    for v in range(1, n_nodes):
        add(v - 1, v)   # chain keeps the sink reachable
    for u in range(n_nodes - 1):
        for v in range(u + 1, n_nodes):
            if rng.random() < 0.5:
                add(u, v)
    edges.sort(key=lambda e: (e.tail, e.head))
    return tuple(edges)


def edmonds_karp(data: FlowData) -> int:
    """Max flow by BFS augmenting paths on the residual graph."""
    n = data.n_nodes
    cap = [[0] * n for _ in range(n)]
    for e in data.edges:
        cap[e.tail][e.head] += e.cap
    flow = 0
    while True:
        parent = [-1] * n
        parent[0] = 0
        queue = deque([0])
        while queue and parent[n - 1] < 0:
            u = queue.popleft()
            for v in range(n):
                if parent[v] < 0 and cap[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if parent[n - 1] < 0:
            return flow
        bottleneck = None
        v = n - 1
        while v != 0:
            u = parent[v]
            bottleneck = cap[u][v] if bottleneck is None else min(bottleneck, cap[u][v])
            v = u
        v = n - 1
        while v != 0:
            u = parent[v]
            cap[u][v] -= bottleneck
            cap[v][u] += bottleneck
            v = u
        flow += bottleneck


def successive_shortest_paths(
    n: int, edges: tuple[FlowEdge, ...], required: int
) -> float:
    """Min-cost shipment of `required` units from node 0 to node n-1."""
    arcs: list[list[int]] = []   # [to, cap, cost, reverse-index]
    graph: list[list[int]] = [[] for _ in range(n)]

    def add_arc(u: int, v: int, cap: int, cost: int) -> None:
        graph[u].append(len(arcs))
        arcs.append([v, cap, cost, len(arcs) + 1])
        graph[v].append(len(arcs))
        arcs.append([u, 0, -cost, len(arcs) - 1])

    for e in edges:
        add_arc(e.tail, e.head, e.cap, e.cost)

    remaining = required
    total = 0.0
    while remaining > 0:
        dist = [float("inf")] * n
        in_arc = [-1] * n
        dist[0] = 0.0
        for _ in range(n - 1):   # Bellman-Ford; residual costs can be negative
            changed = False
            for u in range(n):
                if dist[u] == float("inf"):
                    continue
                for k in graph[u]:
                    to, cap, cost, _ = arcs[k]
                    if cap > 0 and dist[u] + cost < dist[to]:
                        dist[to] = dist[u] + cost
                        in_arc[to] = k
                        changed = True
            if not changed:
                break
        if dist[n - 1] == float("inf"):
            raise ValueError("network cannot ship the required amount")
        push = remaining
        v = n - 1
        while v != 0:
            k = in_arc[v]
            push = min(push, arcs[k][1])
            v = arcs[k ^ 1][0]
        v = n - 1
        while v != 0:
            k = in_arc[v]
            arcs[k][1] -= push
            arcs[k ^ 1][1] += push
            v = arcs[k ^ 1][0]
        total += push * dist[n - 1]
        remaining -= push
    return total


def generate_max_flow(n_nodes: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 3 <= n_nodes <= MAX_NODES:
        raise SizeError(f"node count {n_nodes} outside [3, {MAX_NODES}]")
    rng = np.random.default_rng([seed, 45])
    data = FlowData(n_nodes, _random_network(rng, n_nodes, with_costs=False))
    problem = max_flow_problem(data)
    outcome = solve_milp(problem)
    names = labels.pick(labels.STATIONS, n_nodes, rng)
    proxy = SemanticProxy(
        class_tag=ClassId.MAX_FLOW.value,
        entity_labels=names,
        roles={name: "network node" for name in names},
    )
    return ClassInstance(ClassId.MAX_FLOW, problem, proxy, outcome.value, data)


def generate_min_cost_flow(n_nodes: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 3 <= n_nodes <= MAX_NODES:
        raise SizeError(f"node count {n_nodes} outside [3, {MAX_NODES}]")
    rng = np.random.default_rng([seed, 46])
    edges = _random_network(rng, n_nodes, with_costs=True)
    capacity = edmonds_karp(FlowData(n_nodes, edges))
    required = max(1, capacity // 2)
    data = FlowData(n_nodes, edges, required=required)
    problem = min_cost_flow_problem(data)
    outcome = solve_milp(problem)
    names = labels.pick(labels.STATIONS, n_nodes, rng)
    proxy = SemanticProxy(
        class_tag=ClassId.MIN_COST_FLOW.value,
        entity_labels=names,
        roles={name: "network node" for name in names},
    )
    return ClassInstance(ClassId.MIN_COST_FLOW, problem, proxy, outcome.value, data)


def generate_transportation(sources: int, sinks: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 2 <= sources <= MAX_SIDE or not 2 <= sinks <= MAX_SIDE:
        raise SizeError(f"transportation size {sources}x{sinks} outside [2, {MAX_SIDE}]^2")
    rng = np.random.default_rng([seed, 47])
    supplies = [int(rng.integers(5, 21)) for _ in range(sources)]
    total = sum(supplies)
    cuts = sorted(rng.choice(np.arange(1, total), size=sinks - 1, replace=False))
    demands = []
    prev = 0
    for cut in list(cuts) + [total]:
        demands.append(int(cut - prev))
        prev = cut
    costs = tuple(
        tuple(int(rng.integers(2, 16)) for _ in range(sinks)) for _ in range(sources)
    )
    data = TransportationData(tuple(supplies), tuple(demands), costs)
    problem = transportation_problem(data)
    outcome = solve_milp(problem)
    names = labels.pick(labels.FACILITIES, sources, rng) + labels.pick(labels.STORES, sinks, rng)
    proxy = SemanticProxy(
        class_tag=ClassId.TRANSPORTATION.value,
        entity_labels=names,
        roles={name: ("shipping origin" if k < sources else "delivery destination")
               for k, name in enumerate(names)},
    )
    return ClassInstance(ClassId.TRANSPORTATION, problem, proxy, outcome.value, data)


def transportation_oracle(data: TransportationData) -> float:
    """Min cost via successive shortest paths on the bipartite network."""
    s, d = len(data.supplies), len(data.demands)
    # nodes: 0 source, 1..s plants, s+1..s+d stores, s+d+1 sink
    n = s + d + 2
    edges: list[FlowEdge] = []
    for i in range(s):
        edges.append(FlowEdge(0, 1 + i, data.supplies[i], 0))
    for i in range(s):
        for j in range(d):
            edges.append(FlowEdge(1 + i, 1 + s + j, min(data.supplies[i], data.demands[j]), data.costs[i][j]))
    for j in range(d):
        edges.append(FlowEdge(1 + s + j, n - 1, data.demands[j], 0))
    return successive_shortest_paths(n, tuple(edges), sum(data.supplies))


def min_cost_flow_oracle(data: FlowData) -> float:
    return successive_shortest_paths(data.n_nodes, data.edges, data.required)


def max_flow_oracle(data: FlowData) -> float:
    return float(edmonds_karp(data))
