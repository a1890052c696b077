"""Mixed integer/continuous agreement against a two-layer oracle.

The oracle enumerates every assignment of the integer variables over their
(finite) boxes and solves the continuous remainder by basic-solution
enumeration; it never touches the simplex engine, so agreement here checks
the branch-and-bound continuous handling end to end.
"""

from itertools import product

import numpy as np
import pytest

from milpforge.model import (
    Constraint,
    DecisionVariable,
    LinearExpr,
    Problem,
    Relation,
    Sense,
)
from milpforge.solver import LimitError, SolverConfig, Status, solve_milp

from util import lp_vertex_enumerate


def mixed_oracle(problem: Problem) -> float | None:
    """Best objective over all integer assignments x_I, each scored by vertex
    enumeration of the continuous slice. None when nothing is feasible."""
    int_idx = [j for j, v in enumerate(problem.variables) if v.integral]
    cont_idx = [j for j, v in enumerate(problem.variables) if not v.integral]
    grids = []
    for j in int_idx:
        v = problem.variables[j]
        grids.append(range(int(np.ceil(v.lower)), int(np.floor(v.upper)) + 1))
    best = None
    better = max if problem.sense is Sense.MAX else min
    for assignment in product(*grids):
        fixed = dict(zip(int_idx, assignment))
        # substitute the fixed integers into objective and constraints
        obj_terms = []
        obj_const = problem.objective.constant
        remap = {j: k for k, j in enumerate(cont_idx)}
        for coef, j in problem.objective.terms:
            if j in fixed:
                obj_const += coef * fixed[j]
            else:
                obj_terms.append((coef, remap[j]))
        cons = []
        feasible = True
        for con in problem.constraints:
            terms = []
            shift = con.lhs.constant
            for coef, j in con.lhs.terms:
                if j in fixed:
                    shift += coef * fixed[j]
                else:
                    terms.append((coef, remap[j]))
            rhs = con.rhs - shift
            if not terms:
                gap = 0.0 - rhs
                if con.relation is Relation.LE and gap > 1e-9:
                    feasible = False
                elif con.relation is Relation.GE and -gap > 1e-9:
                    feasible = False
                elif con.relation is Relation.EQ and abs(gap) > 1e-9:
                    feasible = False
                continue
            cons.append(Constraint(LinearExpr(tuple(terms)), con.relation, rhs))
        if not feasible:
            continue
        if not cont_idx:
            value = obj_const
        else:
            slice_problem = Problem(
                sense=problem.sense,
                variables=tuple(problem.variables[j] for j in cont_idx),
                objective=LinearExpr(tuple(obj_terms), obj_const),
                constraints=tuple(cons),
            )
            value = lp_vertex_enumerate(slice_problem)
            if value is None:
                continue
        best = value if best is None else better(best, value)
    return best


def random_mixed_milp(rng: np.random.Generator) -> Problem:
    n_int = int(rng.integers(1, 4))
    n_cont = int(rng.integers(1, 3))
    variables = []
    for j in range(n_int):
        lo = int(rng.integers(0, 3))
        variables.append(
            DecisionVariable(f"k{j}", float(lo), float(lo + rng.integers(1, 5)), integral=True)
        )
    for j in range(n_cont):
        variables.append(DecisionVariable(f"y{j}", 0.0, float(rng.integers(2, 8))))
    n = len(variables)
    obj = LinearExpr(tuple((float(rng.integers(-6, 8)), j) for j in range(n)))
    cons = []
    for _ in range(int(rng.integers(1, 4))):
        terms = tuple(
            (float(rng.integers(-3, 6)), j) for j in range(n) if rng.random() < 0.85
        )
        if not terms:
            continue
        rel = (Relation.LE, Relation.GE)[int(rng.integers(0, 2))]
        cons.append(Constraint(LinearExpr(terms), rel, float(rng.integers(-5, 25))))
    sense = Sense.MAX if rng.random() < 0.5 else Sense.MIN
    return Problem(sense=sense, variables=tuple(variables), objective=obj, constraints=tuple(cons))


def test_mixed_problems_match_two_layer_oracle():
    rng = np.random.default_rng(60601)
    checked = 0
    for _ in range(80):
        problem = random_mixed_milp(rng)
        expected = mixed_oracle(problem)
        outcome = solve_milp(problem)
        if expected is None:
            assert outcome.status is Status.INFEASIBLE
        else:
            assert outcome.status is Status.OPTIMAL
            assert outcome.value == pytest.approx(expected, abs=1e-6)
            checked += 1
    assert checked > 30


def test_unbounded_relaxation_infeasible_lattice_raises_limit():
    """max x with x - 2y = 0.5 over nonnegative integers: the relaxation is
    unbounded but no lattice point exists. The engine must never answer with
    a wrong status; exhausting a budget is the honest outcome."""
    problem = Problem(
        sense=Sense.MAX,
        variables=(
            DecisionVariable("x", 0.0, float("inf"), integral=True),
            DecisionVariable("y", 0.0, float("inf"), integral=True),
        ),
        objective=LinearExpr(((1.0, 0),)),
        constraints=(
            Constraint(LinearExpr(((1.0, 0), (-2.0, 1))), Relation.EQ, 0.5),
        ),
    )
    with pytest.raises(LimitError):
        solve_milp(problem, SolverConfig(node_limit=300, time_limit=5.0))


def test_unbounded_relaxation_feasible_lattice_is_unbounded():
    problem = Problem(
        sense=Sense.MAX,
        variables=(
            DecisionVariable("x", 0.0, float("inf"), integral=True),
            DecisionVariable("y", 0.0, float("inf"), integral=True),
        ),
        objective=LinearExpr(((1.0, 0),)),
        constraints=(
            Constraint(LinearExpr(((1.0, 0), (-2.0, 1))), Relation.EQ, 0.0),
        ),
    )
    assert solve_milp(problem).status is Status.UNBOUNDED
