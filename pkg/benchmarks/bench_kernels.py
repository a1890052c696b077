"""Compare the numba and numpy simplex kernels on a mixed solve workload.

Usage:
    python benchmarks/bench_kernels.py [instances]

Runs the same seeded batch of random MILPs and structured-class instances
through solve_milp under each kernel and prints wall times and pivot totals
(which must match exactly between kernels).
"""

import sys
import time

import numpy as np

from milpforge.classes import ClassId, generate_class_instance
from milpforge.model import (
    Constraint,
    DecisionVariable,
    LinearExpr,
    Problem,
    Relation,
    Sense,
)
from milpforge.solver import solve_milp
from milpforge.solver import kernels
from milpforge.solver.kernels import _simplex_loop, simplex_kernel_numpy


def random_milp(rng: np.random.Generator) -> Problem:
    n = int(rng.integers(3, 9))
    m = int(rng.integers(3, 9))
    variables = tuple(
        DecisionVariable(
            f"x{j}", 0.0, float(rng.integers(5, 15)), integral=bool(rng.random() < 0.5)
        )
        for j in range(n)
    )
    objective = LinearExpr(tuple((float(rng.integers(-9, 10)), j) for j in range(n)))
    constraints = tuple(
        Constraint(
            LinearExpr(tuple((float(rng.integers(-4, 8)), j) for j in range(n))),
            Relation.LE if rng.random() < 0.7 else Relation.GE,
            float(rng.integers(5, 60)),
        )
        for _ in range(m)
    )
    return Problem(Sense.MAX if rng.random() < 0.5 else Sense.MIN,
                   variables, objective, constraints)


def build_workload(count: int) -> list[Problem]:
    rng = np.random.default_rng(2024)
    problems = [random_milp(rng) for _ in range(count)]
    for seed in range(count // 4):
        problems.append(generate_class_instance(ClassId.TSP, seed, {"n_cities": 6}).problem)
        problems.append(generate_class_instance(ClassId.BIN_PACKING, seed, {"n_items": 7}).problem)
    return problems


def run(problems: list[Problem], kernel, name: str) -> tuple[float, int]:
    kernels._KERNEL = kernel
    # warm-up covers JIT compilation so the timed loop measures steady state
    solve_milp(problems[0])
    t0 = time.perf_counter()
    pivots = 0
    for problem in problems:
        try:
            pivots += solve_milp(problem).stats.pivots
        except Exception:
            pass
    elapsed = time.perf_counter() - t0
    print(f"{name:8s} {elapsed:8.2f}s   total pivots {pivots}")
    return elapsed, pivots


def main() -> None:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 120
    problems = build_workload(count)
    print(f"workload: {len(problems)} MILPs (kernel active at import: {kernels.active_kernel_name()})")
    saved = kernels._KERNEL
    try:
        t_numpy, p_numpy = run(problems, simplex_kernel_numpy, "numpy")
        try:
            from numba import njit
        except ImportError:
            print("numba not importable; skipping the jit lane")
            return
        jitted = njit(cache=True, nogil=True)(_simplex_loop)
        t_numba, p_numba = run(problems, jitted, "numba")
        if p_numpy != p_numba:
            print("WARNING: pivot totals differ between kernels")
        else:
            print(f"speedup: {t_numpy / t_numba:.1f}x (identical pivot totals)")
    finally:
        kernels._KERNEL = saved


if __name__ == "__main__":
    main()
