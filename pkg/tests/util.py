"""Shared test helpers: independent oracles and random instance builders."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from milpforge.model import (
    Constraint,
    DecisionVariable,
    LinearExpr,
    Problem,
    Relation,
    Sense,
)


def lp_vertex_enumerate(problem: Problem) -> float | None:
    """Optimum of a small inequality-form LP by basic-solution enumeration.

    Collects every constraint and finite bound as a halfplane a.x <= / >= / = b,
    solves each n-subset as a linear system, keeps feasible intersection
    points, and returns the best objective. None when no vertex is feasible.
    Only valid for LPs whose optimum is attained at a vertex (bounded ones).
    """
    n = problem.n
    rows: list[tuple[np.ndarray, Relation, float]] = []
    for con in problem.constraints:
        a = np.zeros(n)
        for coef, j in con.lhs.terms:
            a[j] = coef
        rows.append((a, con.relation, con.rhs - con.lhs.constant))
    for j, v in enumerate(problem.variables):
        if np.isfinite(v.lower):
            e = np.zeros(n)
            e[j] = 1.0
            rows.append((e, Relation.GE, v.lower))
        if np.isfinite(v.upper):
            e = np.zeros(n)
            e[j] = 1.0
            rows.append((e, Relation.LE, v.upper))

    c = np.zeros(n)
    for coef, j in problem.objective.terms:
        c[j] = coef
    best = None
    for subset in combinations(range(len(rows)), n):
        A = np.array([rows[i][0] for i in subset])
        b = np.array([rows[i][2] for i in subset])
        if abs(np.linalg.det(A)) < 1e-9:
            continue
        x = np.linalg.solve(A, b)
        ok = True
        for a, rel, rhs in rows:
            v = float(a @ x)
            if rel is Relation.LE and v > rhs + 1e-7:
                ok = False
            elif rel is Relation.GE and v < rhs - 1e-7:
                ok = False
            elif rel is Relation.EQ and abs(v - rhs) > 1e-7:
                ok = False
            if not ok:
                break
        if not ok:
            continue
        val = float(c @ x) + problem.objective.constant
        if best is None:
            best = val
        elif problem.sense is Sense.MAX:
            best = max(best, val)
        else:
            best = min(best, val)
    return best


def random_bounded_milp(rng: np.random.Generator, n_max: int = 6, m_max: int = 6) -> Problem:
    """A random all-integer MILP with bounds inside [0, 10]: brute-forceable."""
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(0, m_max + 1))
    variables = []
    for j in range(n):
        lo = int(rng.integers(0, 5))
        hi = lo + int(rng.integers(0, 11 - lo))
        variables.append(DecisionVariable(f"x{j + 1}", float(lo), float(hi), integral=True))
    obj = LinearExpr(
        tuple((float(rng.integers(-9, 10)), j) for j in range(n)),
        float(rng.integers(-5, 6)),
    )
    cons = []
    for _ in range(m):
        terms = tuple(
            (float(rng.integers(-6, 7)), j) for j in range(n) if rng.random() < 0.8
        )
        rel = (Relation.LE, Relation.GE, Relation.EQ)[int(rng.integers(0, 3))]
        rhs = float(rng.integers(-20, 40))
        cons.append(Constraint(LinearExpr(terms), rel, rhs))
    sense = Sense.MAX if rng.random() < 0.5 else Sense.MIN
    return Problem(sense=sense, variables=tuple(variables), objective=obj, constraints=tuple(cons))
