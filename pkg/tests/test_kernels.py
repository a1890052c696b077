"""The numba and numpy pivot kernels must make identical choices."""

import numpy as np
import pytest

from milpforge.model import Sense, canonicalize
from milpforge.solver.kernels import _simplex_loop, simplex_kernel_numpy
from milpforge.solver.simplex import solve_relaxation

from util import random_bounded_milp


def random_phase2_tableau(rng: np.random.Generator):
    """A feasible start tableau: slack basis for A x <= b with b >= 0."""
    m = int(rng.integers(2, 7))
    n = int(rng.integers(2, 7))
    A = rng.integers(-4, 7, size=(m, n)).astype(float)
    b = rng.integers(1, 30, size=m).astype(float)
    c = rng.integers(-9, 10, size=n).astype(float)
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = c
    basis = np.arange(n, n + m, dtype=np.int64)
    return T, basis


def test_kernels_agree_on_random_tableaus():
    rng = np.random.default_rng(99)
    for _ in range(150):
        T, basis = random_phase2_tableau(rng)
        T2, basis2 = T.copy(), basis.copy()
        code_a, piv_a = _simplex_loop(T, basis, 1e-9, 100, 10_000)
        code_b, piv_b = simplex_kernel_numpy(T2, basis2, 1e-9, 100, 10_000)
        assert code_a == code_b
        assert piv_a == piv_b
        assert np.array_equal(basis, basis2)
        assert np.allclose(T, T2, atol=0.0, rtol=0.0, equal_nan=True) or np.allclose(T, T2, atol=1e-15)


def test_kernel_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("MILPFORGE_KERNEL", "numpy")
    import importlib

    import milpforge.solver.kernels as kernels

    importlib.reload(kernels)
    assert kernels.active_kernel_name() == "numpy"
    monkeypatch.delenv("MILPFORGE_KERNEL")
    importlib.reload(kernels)


def test_full_solves_agree_between_kernels():
    from milpforge.solver import kernels

    rng = np.random.default_rng(555)
    problems = [canonicalize(random_bounded_milp(rng)) for _ in range(40)]

    def run_all(kernel):
        save = kernels._KERNEL
        kernels._KERNEL = kernel
        try:
            results = []
            for p in problems:
                lo = np.array([v.lower for v in p.variables])
                hi = np.array([v.upper for v in p.variables])
                sol = solve_relaxation(p, lo, hi, 1e-9)
                results.append((sol.status, sol.value, sol.pivots))
            return results
        finally:
            kernels._KERNEL = save

    loops = run_all(_simplex_loop)
    vec = run_all(simplex_kernel_numpy)
    for (sa, va, pa), (sb, vb, pb) in zip(loops, vec):
        assert sa == sb
        assert pa == pb
        if va is not None:
            assert va == pytest.approx(vb, abs=1e-12)
