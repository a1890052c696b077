"""Dense simplex pivot kernels.

Two interchangeable implementations of the same pivot loop:

* a scalar loop compiled with numba ``@njit`` (default when numba imports),
* a vectorized pure-numpy twin.

Selection: env var ``MILPFORGE_KERNEL`` in {``auto``, ``numba``, ``numpy``}
(default ``auto``). Both make identical pivot choices and return identical
statuses and pivot counts; the benchmark in benchmarks/bench_kernels.py
compares their speed.

Kernel contract: the tableau ``T`` is (m+1) x (ncols+1), row m holds reduced
costs for a *minimization*, column ncols holds the rhs (and -objective in the
last row). ``basis`` maps each of the m rows to its basic column. Entering
rule is Dantzig (most negative reduced cost, first index on ties) until
``bland_after`` consecutive degenerate pivots, then Bland's rule (first
negative index) for anti-cycling. Leaving rule is the minimum ratio, ties
broken toward the smallest basis column. Returns (status, pivots) with
status 0 = optimal, 1 = unbounded, 2 = iteration limit.
"""

from __future__ import annotations

import os

import numpy as np

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITER_LIMIT = 2


def _simplex_loop(T, basis, tol, bland_after, max_iter):
    m = T.shape[0] - 1
    ncols = T.shape[1] - 1
    pivots = 0
    degen = 0
    while pivots < max_iter:
        # entering column
        enter = -1
        if degen >= bland_after:
            for j in range(ncols):
                if T[m, j] < -tol:
                    enter = j
                    break
        else:
            best = -tol
            for j in range(ncols):
                if T[m, j] < best:
                    best = T[m, j]
                    enter = j
        if enter < 0:
            return STATUS_OPTIMAL, pivots

        # ratio test
        leave = -1
        best_ratio = np.inf
        for i in range(m):
            a = T[i, enter]
            if a > tol:
                r = T[i, ncols] / a
                if r < best_ratio:
                    best_ratio = r
                    leave = i
                elif r == best_ratio and basis[i] < basis[leave]:
                    leave = i
        if leave < 0:
            return STATUS_UNBOUNDED, pivots

        # pivot
        piv = T[leave, enter]
        inv = 1.0 / piv
        for j in range(ncols + 1):
            T[leave, j] *= inv
        for i in range(m + 1):
            if i != leave:
                f = T[i, enter]
                if f != 0.0:
                    for j in range(ncols + 1):
                        T[i, j] -= f * T[leave, j]
        basis[leave] = enter
        pivots += 1
        if best_ratio <= tol:
            degen += 1
        else:
            degen = 0
    return STATUS_ITER_LIMIT, pivots


def simplex_kernel_numpy(T, basis, tol, bland_after, max_iter):
    """Vectorized twin of the scalar loop; identical pivot choices."""
    m = T.shape[0] - 1
    ncols = T.shape[1] - 1
    pivots = 0
    degen = 0
    while pivots < max_iter:
        costs = T[m, :ncols]
        if degen >= bland_after:
            neg = np.nonzero(costs < -tol)[0]
            if neg.size == 0:
                return STATUS_OPTIMAL, pivots
            enter = int(neg[0])
        else:
            enter = int(np.argmin(costs))
            if costs[enter] >= -tol:
                return STATUS_OPTIMAL, pivots

        col = T[:m, enter]
        valid = col > tol
        if not valid.any():
            return STATUS_UNBOUNDED, pivots
        ratios = np.full(m, np.inf)
        ratios[valid] = T[:m, ncols][valid] / col[valid]
        best_ratio = ratios.min()
        ties = np.nonzero(ratios == best_ratio)[0]
        leave = int(ties[np.argmin(basis[ties])])

        piv = T[leave, enter]
        T[leave, :] *= 1.0 / piv
        factors = T[:, enter].copy()
        factors[leave] = 0.0
        T -= factors[:, None] * T[leave, :][None, :]
        basis[leave] = enter
        pivots += 1
        if best_ratio <= tol:
            degen += 1
        else:
            degen = 0
    return STATUS_ITER_LIMIT, pivots


def _pick_kernel():
    choice = os.environ.get("MILPFORGE_KERNEL", "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"MILPFORGE_KERNEL must be auto, numba, or numpy, not {choice!r}")
    if choice == "numpy":
        return simplex_kernel_numpy, "numpy"
    try:
        from numba import njit
    except ImportError:
        if choice == "numba":
            raise RuntimeError("MILPFORGE_KERNEL=numba but numba is not importable")
        return simplex_kernel_numpy, "numpy"
    jitted = njit(cache=True, nogil=True)(_simplex_loop)
    return jitted, "numba"


_KERNEL, _KERNEL_NAME = _pick_kernel()


def active_kernel_name() -> str:
    return _KERNEL_NAME


def simplex_kernel(T, basis, tol, bland_after, max_iter):
    """Run the active pivot kernel in place on (T, basis)."""
    return _KERNEL(T, basis, float(tol), int(bland_after), int(max_iter))
