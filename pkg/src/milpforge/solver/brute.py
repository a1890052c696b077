"""Exhaustive grid enumeration oracle.

Independent of the simplex path on purpose: feasibility and objectives are
evaluated with plain vectorized numpy over the full integer lattice, in
chunks. Only sensible for small all-integer boxes; the hard cap is 10^7
points.
"""

from __future__ import annotations

import math

import numpy as np

from ..model import FEAS_TOL, Problem, Relation, Sense, canonicalize
from .outcome import SolveOutcome, SolveStats, Status, UnsupportedProblemError

GRID_LIMIT = 10_000_000
_CHUNK = 1 << 16


def brute_force(problem: Problem, tol: float = FEAS_TOL) -> SolveOutcome:
    """Enumerate every integer point in the (finite) bound box.

    Requires all variables integral with finite bounds. Returns the exact
    optimum, or Infeasible when no grid point satisfies the constraints.
    """
    prob = canonicalize(problem)
    lows: list[int] = []
    sizes: list[int] = []
    for v in prob.variables:
        if not v.integral:
            raise UnsupportedProblemError(f"{v.name} is continuous")
        if not (math.isfinite(v.lower) and math.isfinite(v.upper)):
            raise UnsupportedProblemError(f"{v.name} has an infinite bound")
        lo = math.ceil(v.lower - tol)
        hi = math.floor(v.upper + tol)
        if lo > hi:
            return SolveOutcome(Status.INFEASIBLE, stats=SolveStats(0, 0))
        lows.append(lo)
        sizes.append(hi - lo + 1)

    total = 1
    for s in sizes:
        total *= s
        if total > GRID_LIMIT:
            raise UnsupportedProblemError(f"grid larger than {GRID_LIMIT} points")

    n = prob.n
    strides = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]
    lows_arr = np.array(lows, dtype=np.int64)
    sizes_arr = np.array(sizes, dtype=np.int64)

    m = prob.m
    A = np.zeros((m, n))
    b = np.zeros(m)
    le = np.zeros(m, dtype=bool)
    ge = np.zeros(m, dtype=bool)
    eq = np.zeros(m, dtype=bool)
    for i, con in enumerate(prob.constraints):
        for coef, j in con.lhs.terms:
            A[i, j] = coef
        b[i] = con.rhs
        le[i] = con.relation is Relation.LE
        ge[i] = con.relation is Relation.GE
        eq[i] = con.relation is Relation.EQ

    c = np.zeros(n)
    for coef, j in prob.objective.terms:
        c[j] = coef
    maximize = prob.sense is Sense.MAX

    best_value: float | None = None
    best_point: np.ndarray | None = None

    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        pts = lows_arr[None, :] + (idx[:, None] // strides[None, :]) % sizes_arr[None, :]
        pts = pts.astype(np.float64)
        if m:
            lhs = pts @ A.T
            ok = np.ones(len(idx), dtype=bool)
            if le.any():
                ok &= (lhs[:, le] <= b[le] + tol).all(axis=1)
            if ge.any():
                ok &= (lhs[:, ge] >= b[ge] - tol).all(axis=1)
            if eq.any():
                ok &= (np.abs(lhs[:, eq] - b[eq]) <= tol).all(axis=1)
        else:
            ok = np.ones(len(idx), dtype=bool)
        if not ok.any():
            continue
        vals = pts[ok] @ c + prob.objective.constant
        k = int(np.argmax(vals)) if maximize else int(np.argmin(vals))
        v = float(vals[k])
        if best_value is None or (v > best_value if maximize else v < best_value):
            best_value = v
            best_point = pts[ok][k]

    stats = SolveStats(pivots=0, nodes=total)
    if best_value is None:
        return SolveOutcome(Status.INFEASIBLE, stats=stats)
    return SolveOutcome(
        Status.OPTIMAL,
        value=best_value,
        point=tuple(float(v) for v in best_point),
        stats=stats,
    )


def verify_value(problem: Problem, claimed: float, eps: float) -> bool:
    """True iff the exact optimum exists and sits within eps of `claimed`."""
    from .branch_bound import solve_milp

    if eps <= 0:
        raise ValueError("eps must be positive")
    outcome = solve_milp(problem)
    if outcome.status is not Status.OPTIMAL:
        return False
    return abs(outcome.value - claimed) <= eps
