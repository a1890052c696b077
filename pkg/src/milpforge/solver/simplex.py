"""Two-phase primal simplex on a dense tableau.

Standard-form conversion: every variable is shifted/mirrored/split to a
nonnegative column, finite two-sided bounds add a cap row, rows become
equalities with slack or surplus columns, and rows that cannot start from a
slack basis get an artificial column. Phase 1 minimizes the artificial sum;
phase 2 re-prices the original objective. Adequate at desk scale (n, m up to
a few hundred); no presolve, no scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..model import Problem, Relation, Sense
from .kernels import (
    STATUS_ITER_LIMIT,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    simplex_kernel,
)

LP_OPTIMAL = "optimal"
LP_INFEASIBLE = "infeasible"
LP_UNBOUNDED = "unbounded"

# Phase-1 objective above this is declared infeasible: well above float noise
# at desk-scale magnitudes, well below any honest violation.
_PHASE1_TOL = 1e-7

# Columns smaller than this cannot anchor a pivot when driving artificials out.
_PIVOT_TOL = 1e-9


class IterationLimit(Exception):
    """The pivot budget ran out before the phase finished."""


@dataclass
class LpSolution:
    status: str
    value: float | None
    x: np.ndarray | None   # in original variable space
    pivots: int


class _StandardForm:
    """Nonnegative-column reformulation of one LP relaxation."""

    def __init__(self, problem: Problem, lo: np.ndarray, hi: np.ndarray):
        self.empty_box = bool(np.any(lo > hi))
        if self.empty_box:
            return
        n = problem.n
        self.n = n
        self.var_offset = np.zeros(n)
        self.col_var: list[int] = []
        self.col_sign: list[float] = []
        col_of_var: list[list[int]] = [[] for _ in range(n)]
        cap_rows: list[tuple[int, float]] = []

        for j in range(n):
            l, u = float(lo[j]), float(hi[j])
            if math.isfinite(l):
                self.var_offset[j] = l
                col_of_var[j] = [len(self.col_var)]
                self.col_var.append(j)
                self.col_sign.append(1.0)
                if math.isfinite(u):
                    cap_rows.append((col_of_var[j][0], u - l))
            elif math.isfinite(u):
                self.var_offset[j] = u
                col_of_var[j] = [len(self.col_var)]
                self.col_var.append(j)
                self.col_sign.append(-1.0)
            else:
                col_of_var[j] = [len(self.col_var), len(self.col_var) + 1]
                self.col_var.extend((j, j))
                self.col_sign.extend((1.0, -1.0))

        self.ncols = len(self.col_var)
        signs = np.array(self.col_sign)

        m = problem.m + len(cap_rows)
        self.m = m
        self.rows = np.zeros((m, self.ncols))
        self.rels: list[Relation] = []
        self.rhs = np.zeros(m)

        for i, con in enumerate(problem.constraints):
            shift = con.lhs.constant
            for coef, j in con.lhs.terms:
                for k in col_of_var[j]:
                    self.rows[i, k] += coef * signs[k]
                shift += coef * self.var_offset[j]
            self.rels.append(con.relation)
            self.rhs[i] = con.rhs - shift
        for r, (k, cap) in enumerate(cap_rows):
            i = problem.m + r
            self.rows[i, k] = 1.0
            self.rels.append(Relation.LE)
            self.rhs[i] = cap

        # objective in minimization orientation
        self.minimize = problem.sense is Sense.MIN
        c = np.zeros(self.ncols)
        shift = problem.objective.constant
        for coef, j in problem.objective.terms:
            for k in col_of_var[j]:
                c[k] += coef * signs[k]
            shift += coef * self.var_offset[j]
        self.obj_shift = shift
        self.c_min = c if self.minimize else -c

    def to_original(self, x_std: np.ndarray) -> np.ndarray:
        x = self.var_offset.copy()
        for k in range(self.ncols):
            x[self.col_var[k]] += self.col_sign[k] * x_std[k]
        return x

    def true_value(self, z_min: float) -> float:
        return z_min + self.obj_shift if self.minimize else -z_min + self.obj_shift


def _eliminate(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    """One pivot outside the kernel (used to drive artificials out)."""
    T[row, :] *= 1.0 / T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= factors[:, None] * T[row, :][None, :]
    basis[row] = col


def solve_relaxation(
    problem: Problem,
    lo: np.ndarray,
    hi: np.ndarray,
    lp_tol: float,
    max_pivots: int = 200_000,
) -> LpSolution:
    """Solve the LP relaxation of `problem` with bounds overridden by lo/hi.

    Integrality flags are ignored. Raises IterationLimit when the pivot
    budget is exhausted; never returns a guessed status.
    """
    sf = _StandardForm(problem, np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    if sf.empty_box:
        return LpSolution(LP_INFEASIBLE, None, None, 0)

    ncols, m = sf.ncols, sf.m
    pivots = 0

    if m == 0:
        # nothing but one-sided bounds: each column sits at zero unless its
        # cost pushes it to infinity
        if np.any(sf.c_min < -lp_tol):
            return LpSolution(LP_UNBOUNDED, None, None, 0)
        x = sf.to_original(np.zeros(ncols))
        return LpSolution(LP_OPTIMAL, sf.true_value(0.0), x, 0)

    A = sf.rows
    b = sf.rhs.copy()

    slack = np.zeros((m, m))
    for i, rel in enumerate(sf.rels):
        if rel is Relation.LE:
            slack[i, i] = 1.0
        elif rel is Relation.GE:
            slack[i, i] = -1.0
    A = np.hstack([A, slack])

    flip = b < 0
    A[flip] = -A[flip]
    b[flip] = -b[flip]

    total = ncols + m
    basis = np.full(m, -1, dtype=np.int64)
    art_rows = []
    for i in range(m):
        if A[i, ncols + i] == 1.0:
            basis[i] = ncols + i
        else:
            art_rows.append(i)

    n_art = len(art_rows)
    T = np.zeros((m + 1, total + n_art + 1))
    T[:m, :total] = A
    T[:m, -1] = b
    for a, i in enumerate(art_rows):
        T[i, total + a] = 1.0
        basis[i] = total + a
    bland_after = 2 * (m + total + n_art)

    if n_art:
        # phase-1 objective: sum of artificials, priced out of the start basis
        T[m, total:total + n_art] = 1.0
        for i in art_rows:
            T[m, :] -= T[i, :]
        code, p = simplex_kernel(T, basis, lp_tol, bland_after, max_pivots)
        pivots += p
        if code == STATUS_ITER_LIMIT:
            raise IterationLimit("phase 1 pivot budget exhausted")
        if code == STATUS_UNBOUNDED:
            raise RuntimeError("phase-1 LP cannot be unbounded; numerical breakdown")
        if -T[m, -1] > _PHASE1_TOL:
            return LpSolution(LP_INFEASIBLE, None, None, pivots)

        # drive leftover artificials out of the basis; unremovable rows are
        # redundant constraints
        drop: list[int] = []
        for i in range(m):
            if basis[i] >= total:
                target = -1
                for j in range(total):
                    if abs(T[i, j]) > _PIVOT_TOL:
                        target = j
                        break
                if target >= 0:
                    _eliminate(T, basis, i, target)
                else:
                    drop.append(i)
        if drop:
            keep = [i for i in range(m) if i not in drop]
            T = np.ascontiguousarray(np.vstack([T[keep, :], T[m:, :]]))
            basis = basis[keep].copy()
            m = len(keep)

    # phase 2: drop artificial columns, re-price the real objective
    T2 = np.zeros((m + 1, total + 1))
    T2[:m, :total] = T[:m, :total]
    T2[:m, -1] = T[:m, -1]
    T2[m, :ncols] = sf.c_min
    for i in range(m):
        cb = T2[m, basis[i]]
        if cb != 0.0:
            T2[m, :] -= cb * T2[i, :]
    code, p = simplex_kernel(T2, basis, lp_tol, bland_after, max_pivots - pivots)
    pivots += p
    if code == STATUS_ITER_LIMIT:
        raise IterationLimit("phase 2 pivot budget exhausted")
    if code == STATUS_UNBOUNDED:
        return LpSolution(LP_UNBOUNDED, None, None, pivots)

    x_std = np.zeros(total)
    for i in range(m):
        x_std[basis[i]] = T2[i, -1]
    x = sf.to_original(x_std[:ncols])
    return LpSolution(LP_OPTIMAL, sf.true_value(-T2[m, -1]), x, pivots)
