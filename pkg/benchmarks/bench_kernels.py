#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the RK4 propagator (compiled loops vs vectorized numpy vs plain-python
loops) and the Jacobi eigensolver (compiled vs plain python) on representative
desk-scale problems and prints timings with speedups.
"""
import time

import numpy as np

import rotframe as rf
from rotframe.kernels import (
    NUMBA_ENABLED,
    _jacobi_sweeps,
    _rk4_loops,
    _rk4_numpy,
)

if NUMBA_ENABLED:
    from numba import njit

    rk4_compiled = njit(cache=True)(_rk4_loops)
    jacobi_compiled = njit(cache=True)(_jacobi_sweeps)


def timeit(fn, *args, repeat=5):
    best = np.inf
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def rk4_problem(n_steps):
    system = rf.named_system("diamond")
    rng = np.random.default_rng(1)
    h = rf.build_rwa_hamiltonian(system)
    rows, cols, amps, freqs = h.term_arrays()
    amps = amps * np.exp(1j * rng.uniform(0, 2 * np.pi, amps.size))
    psi0 = np.zeros(4, dtype=np.complex128)
    psi0[0] = 1.0
    return h.diagonal, rows, cols, amps, freqs, psi0, 0.002, n_steps


def bench_rk4(n_steps=100_000):
    args = rk4_problem(n_steps)
    print(f"RK4 propagation: 4 levels, 4 drive terms, {n_steps} steps")
    t_np, ref = timeit(_rk4_numpy, *args, repeat=1)
    print(f"  numpy vectorized: {t_np * 1e3:9.1f} ms")
    if NUMBA_ENABLED:
        rk4_compiled(*rk4_problem(10))  # warm the JIT outside the timing
        t_nb, out = timeit(rk4_compiled, *args, repeat=3)
        err = np.max(np.abs(out - ref))
        print(f"  numba njit:       {t_nb * 1e3:9.1f} ms   "
              f"(speedup {t_np / t_nb:5.1f}x, max |diff| {err:.1e})")
    small = rk4_problem(n_steps // 100)
    t_py, _ = timeit(_rk4_loops, *small, repeat=1)
    print(f"  python loops:     {t_py * 100 * 1e3:9.1f} ms   (extrapolated from 1%)")


def jacobi_problem(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = (m + m.conj().T).astype(np.complex128)
    return m


def bench_jacobi(n=12, reps=300):
    print(f"Jacobi eigensolver: {n}x{n} Hermitian, {reps} matrices")
    mats = [jacobi_problem(n, s) for s in range(reps)]
    tol = 1e-14 * np.linalg.norm(mats[0])

    def run(fn):
        for m in mats:
            fn(m.copy(), tol, 100)

    t_py, _ = timeit(run, _jacobi_sweeps, repeat=1)
    print(f"  python loops:     {t_py * 1e3:9.1f} ms")
    if NUMBA_ENABLED:
        jacobi_compiled(mats[0].copy(), tol, 100)  # warm the JIT
        t_nb, _ = timeit(run, jacobi_compiled, repeat=1)
        print(f"  numba njit:       {t_nb * 1e3:9.1f} ms   "
              f"(speedup {t_py / t_nb:5.1f}x)")


if __name__ == "__main__":
    print(f"backend selected at import: {rf.BACKEND}")
    if not NUMBA_ENABLED:
        print("numba disabled or unavailable; timing the fallback only\n")
    bench_rk4()
    print()
    bench_jacobi()
