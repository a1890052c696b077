"""Shift scheduling as demand coverage over shift patterns.

Integer worker counts per pattern; every period must be covered by at least
its demand. Pattern counts are capped by the peak demand, which both bounds
the search and keeps the grid oracle exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..model import Constraint, LinearExpr, Problem, Relation, Sense, integer
from . import labels
from .base import ClassId, ClassInstance, SemanticProxy, SizeError

MAX_PERIODS = 8
MAX_PATTERNS = 5


@dataclass(frozen=True)
class SchedulingData:
    demands: tuple[int, ...]                  # per period
    covers: tuple[tuple[bool, ...], ...]      # covers[pattern][period]
    costs: tuple[float, ...]                  # per pattern


def scheduling_problem(data: SchedulingData) -> Problem:
    p = len(data.covers)
    peak = float(max(data.demands))
    cons = tuple(
        Constraint(
            LinearExpr(tuple((1.0, k) for k in range(p) if data.covers[k][t])),
            Relation.GE,
            float(data.demands[t]),
            label=f"demand_{t + 1}",
        )
        for t in range(len(data.demands))
    )
    return Problem(
        sense=Sense.MIN,
        variables=tuple(integer(f"x{k + 1}", 0.0, peak) for k in range(p)),
        objective=LinearExpr(tuple((data.costs[k], k) for k in range(p))),
        constraints=cons,
        class_tag=ClassId.SHIFT_SCHEDULING.value,
        metadata={"scheduling_vars": "integer"},
    )


def generate_shift_scheduling(periods: int, seed: int) -> ClassInstance:
    from ..solver import solve_milp

    if not 3 <= periods <= MAX_PERIODS:
        raise SizeError(f"period count {periods} outside [3, {MAX_PERIODS}]")
    rng = np.random.default_rng([seed, 44])
    n_patterns = int(rng.integers(3, MAX_PATTERNS + 1))
    covers: list[tuple[bool, ...]] = []
    for _ in range(n_patterns):
        start = int(rng.integers(0, periods))
        length = int(rng.integers(2, periods + 1))
        covers.append(tuple(start <= t < start + length for t in range(periods)))
    # every period must be coverable by someone
    for t in range(periods):
        if not any(cover[t] for cover in covers):
            k = int(rng.integers(0, n_patterns))
            covers[k] = tuple(c or (tt == t) for tt, c in enumerate(covers[k]))
    demands = tuple(int(rng.integers(1, 6)) for _ in range(periods))
    costs = tuple(
        float(sum(cover) * int(rng.integers(3, 9))) for cover in covers
    )
    data = SchedulingData(demands, tuple(covers), costs)
    problem = scheduling_problem(data)
    outcome = solve_milp(problem)
    names = labels.pick(labels.WORKERS, n_patterns, rng)
    proxy = SemanticProxy(
        class_tag=ClassId.SHIFT_SCHEDULING.value,
        entity_labels=names,
        roles={name: "shift pattern with a hireable headcount" for name in names},
    )
    return ClassInstance(ClassId.SHIFT_SCHEDULING, problem, proxy, outcome.value, data)


def oracle(data: SchedulingData) -> float:
    """Exact optimum by enumerating all pattern-count vectors up to peak demand."""
    p = len(data.covers)
    if p > MAX_PATTERNS:
        raise SizeError(f"oracle limited to {MAX_PATTERNS} patterns")
    peak = max(data.demands)
    best = None
    for counts in product(range(peak + 1), repeat=p):
        ok = all(
            sum(counts[k] for k in range(p) if data.covers[k][t]) >= data.demands[t]
            for t in range(len(data.demands))
        )
        if ok:
            cost = sum(counts[k] * data.costs[k] for k in range(p))
            if best is None or cost < best:
                best = cost
    if best is None:
        raise ValueError("instance admits no feasible schedule")
    return float(best)
