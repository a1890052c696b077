"""Exact LP/MILP solving: the ground-truth oracle for every generated label."""

from .branch_bound import solve_lp, solve_milp
from .brute import GRID_LIMIT, brute_force, verify_value
from .kernels import active_kernel_name
from .outcome import (
    LimitError,
    SolveOutcome,
    SolveStats,
    SolverConfig,
    Status,
    UnsupportedProblemError,
)

__all__ = [
    "GRID_LIMIT",
    "LimitError",
    "SolveOutcome",
    "SolveStats",
    "SolverConfig",
    "Status",
    "UnsupportedProblemError",
    "active_kernel_name",
    "brute_force",
    "solve_lp",
    "solve_milp",
    "verify_value",
]
