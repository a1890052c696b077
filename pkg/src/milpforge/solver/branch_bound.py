"""Best-first branch and bound over the simplex relaxation.

Node selection is best-first on the relaxation bound; branching picks the
most-fractional integer variable (ties to the lowest index) and splits on
floor/ceil bound tightenings. Child LPs are solved eagerly so the heap key is
always the node's own bound. Integral candidates are snapped to the lattice
before the objective is recorded, so integer-data problems report exact
integer optima.
"""

from __future__ import annotations

import heapq
import math
import time

import numpy as np

from ..model import LinearExpr, Problem, Sense, canonicalize
from .outcome import LimitError, SolveOutcome, SolveStats, SolverConfig, Status
from .simplex import (
    LP_INFEASIBLE,
    LP_OPTIMAL,
    LP_UNBOUNDED,
    IterationLimit,
    solve_relaxation,
)

# Bounds this close to the incumbent cannot hold a strictly better solution
# (well above simplex float noise, well below any honest objective gap).
_PRUNE_TOL = 1e-9


def _bounds_arrays(problem: Problem) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([v.lower for v in problem.variables])
    hi = np.array([v.upper for v in problem.variables])
    return lo, hi


def solve_lp(problem: Problem, cfg: SolverConfig | None = None) -> SolveOutcome:
    """Solve the LP relaxation (integrality ignored)."""
    cfg = cfg or SolverConfig()
    prob = canonicalize(problem)
    lo, hi = _bounds_arrays(prob)
    try:
        sol = solve_relaxation(prob, lo, hi, cfg.lp_tol)
    except IterationLimit as exc:
        raise LimitError(str(exc)) from exc
    stats = SolveStats(pivots=sol.pivots, nodes=0)
    if sol.status == LP_INFEASIBLE:
        return SolveOutcome(Status.INFEASIBLE, stats=stats)
    if sol.status == LP_UNBOUNDED:
        return SolveOutcome(Status.UNBOUNDED, stats=stats)
    value = float(prob.objective.value(sol.x))
    point = tuple(float(v) for v in sol.x)
    return SolveOutcome(Status.OPTIMAL, value=value, point=point, stats=stats)


def _frac_distance(x: float) -> float:
    return min(x - math.floor(x), math.ceil(x) - x)


def solve_milp(problem: Problem, cfg: SolverConfig | None = None) -> SolveOutcome:
    """Exact MILP solve; the value this returns is the canonical ground truth."""
    cfg = cfg or SolverConfig()
    prob = canonicalize(problem)
    int_idx = [j for j, v in enumerate(prob.variables) if v.integral]
    if not int_idx:
        return solve_lp(prob, cfg)

    maximize = prob.sense is Sense.MAX

    def better(a: float, b: float) -> bool:
        return a > b if maximize else a < b

    def worth_exploring(bound: float, incumbent_value: float) -> bool:
        if maximize:
            return bound > incumbent_value + _PRUNE_TOL
        return bound < incumbent_value - _PRUNE_TOL

    lo0, hi0 = _bounds_arrays(prob)
    for j in int_idx:
        if math.isfinite(lo0[j]):
            lo0[j] = math.ceil(lo0[j] - cfg.int_tol)
        if math.isfinite(hi0[j]):
            hi0[j] = math.floor(hi0[j] + cfg.int_tol)

    deadline = time.monotonic() + cfg.time_limit if cfg.time_limit else None
    nodes = 0
    pivots = 0

    def relax(lo: np.ndarray, hi: np.ndarray):
        nonlocal nodes, pivots
        nodes += 1
        if nodes > cfg.node_limit:
            raise LimitError(f"node limit {cfg.node_limit} exceeded")
        if deadline is not None and time.monotonic() > deadline:
            raise LimitError(f"time limit {cfg.time_limit}s exceeded")
        try:
            sol = solve_relaxation(prob, lo, hi, cfg.lp_tol)
        except IterationLimit as exc:
            raise LimitError(str(exc)) from exc
        pivots += sol.pivots
        return sol

    root = relax(lo0, hi0)
    if root.status == LP_INFEASIBLE:
        return SolveOutcome(Status.INFEASIBLE, stats=SolveStats(pivots, nodes))
    if root.status == LP_UNBOUNDED:
        return _unbounded_or_infeasible(prob, cfg, pivots, nodes)

    heap: list[tuple[float, int, np.ndarray, np.ndarray, np.ndarray, float]] = []
    counter = 0

    def push(bound: float, x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> None:
        nonlocal counter
        heapq.heappush(heap, (-bound if maximize else bound, counter, x, lo, hi, bound))
        counter += 1

    push(root.value, root.x, lo0, hi0)
    incumbent: np.ndarray | None = None
    inc_value = -math.inf if maximize else math.inf

    while heap:
        _, _, x, lo, hi, bound = heapq.heappop(heap)
        if incumbent is not None and not worth_exploring(bound, inc_value):
            continue

        frac_j = -1
        frac_score = cfg.int_tol
        for j in int_idx:
            dist = _frac_distance(float(x[j]))
            if dist > frac_score:
                frac_score = dist
                frac_j = j

        if frac_j < 0:
            snapped = x.copy()
            for j in int_idx:
                snapped[j] = float(round(snapped[j]))
            value = float(prob.objective.value(snapped))
            if incumbent is None or better(value, inc_value):
                incumbent, inc_value = snapped, value
            continue

        xv = float(x[frac_j])
        down_hi = hi.copy()
        down_hi[frac_j] = math.floor(xv)
        up_lo = lo.copy()
        up_lo[frac_j] = math.ceil(xv)
        for child_lo, child_hi in ((lo, down_hi), (up_lo, hi)):
            child = relax(child_lo, child_hi)
            if child.status != LP_OPTIMAL:
                continue   # infeasible child; unbounded cannot appear under a bounded root
            if incumbent is None or worth_exploring(child.value, inc_value):
                push(child.value, child.x, child_lo, child_hi)

    stats = SolveStats(pivots, nodes)
    if incumbent is None:
        return SolveOutcome(Status.INFEASIBLE, stats=stats)
    point = tuple(float(v) for v in incumbent)
    return SolveOutcome(Status.OPTIMAL, value=inc_value, point=point, stats=stats)


def _unbounded_or_infeasible(
    problem: Problem, cfg: SolverConfig, pivots: int, nodes: int
) -> SolveOutcome:
    """Relaxation unbounded: the MILP is unbounded iff any integral point exists."""
    probe = Problem(
        sense=Sense.MIN,
        variables=problem.variables,
        objective=LinearExpr(),
        constraints=problem.constraints,
    )
    feas = solve_milp(probe, cfg)
    stats = SolveStats(pivots + feas.stats.pivots, nodes + feas.stats.nodes)
    if feas.status is Status.OPTIMAL:
        return SolveOutcome(Status.UNBOUNDED, stats=stats)
    return SolveOutcome(Status.INFEASIBLE, stats=stats)
