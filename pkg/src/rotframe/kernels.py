"""Hot numeric kernels: fixed-step RK4 propagation of i dpsi/dt = H(t) psi,
and a cyclic Jacobi eigensolver for complex Hermitian matrices.

The kernels are numba @njit-compiled by default. Set ROTFRAME_NO_NUMBA=1 to
select the pure-numpy path (vectorized per-step assembly for RK4, the same
Jacobi sweep uncompiled); benchmarks/bench_kernels.py compares the two.
"""
from __future__ import annotations

import math
import os

import numpy as np


def _flag_disabled() -> bool:
    return os.environ.get("ROTFRAME_NO_NUMBA", "").strip().lower() in {
        "1", "true", "yes", "on",
    }


try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

NUMBA_ENABLED = _HAVE_NUMBA and not _flag_disabled()
BACKEND = "numba" if NUMBA_ENABLED else "numpy"


# --- RK4 propagation ----------------------------------------------------------

def _deriv_loops(diag, rows, cols, amps, freqs, t, psi, out):
    # out = -i H(t) psi with H assembled from the structured term list
    n = psi.shape[0]
    for i in range(n):
        out[i] = diag[i] * psi[i]
    for k in range(rows.shape[0]):
        val = amps[k] * np.exp(-1j * freqs[k] * t)
        r = rows[k]
        c = cols[k]
        out[r] += val * psi[c]
        out[c] += val.conjugate() * psi[r]
    for i in range(n):
        out[i] *= -1j


def _rk4_loops(diag, rows, cols, amps, freqs, psi0, dt, n_steps):
    n = psi0.shape[0]
    states = np.empty((n_steps + 1, n), dtype=np.complex128)
    psi = psi0.copy()
    states[0] = psi
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    for step in range(n_steps):
        t = step * dt
        _deriv(diag, rows, cols, amps, freqs, t, psi, k1)
        for i in range(n):
            tmp[i] = psi[i] + 0.5 * dt * k1[i]
        _deriv(diag, rows, cols, amps, freqs, t + 0.5 * dt, tmp, k2)
        for i in range(n):
            tmp[i] = psi[i] + 0.5 * dt * k2[i]
        _deriv(diag, rows, cols, amps, freqs, t + 0.5 * dt, tmp, k3)
        for i in range(n):
            tmp[i] = psi[i] + dt * k3[i]
        _deriv(diag, rows, cols, amps, freqs, t + dt, tmp, k4)
        for i in range(n):
            psi[i] = psi[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        states[step + 1] = psi
    return states


def _rk4_numpy(diag, rows, cols, amps, freqs, psi0, dt, n_steps):
    n = psi0.shape[0]
    states = np.empty((n_steps + 1, n), dtype=np.complex128)
    psi = psi0.copy()
    states[0] = psi
    idx = np.arange(n)

    def hmat(t):
        h = np.zeros((n, n), dtype=np.complex128)
        vals = amps * np.exp(-1j * freqs * t)
        h[rows, cols] = vals
        h[cols, rows] = vals.conjugate()
        h[idx, idx] = diag
        return h

    for step in range(n_steps):
        t = step * dt
        h1 = hmat(t)
        h2 = hmat(t + 0.5 * dt)
        h4 = hmat(t + dt)
        k1 = -1j * (h1 @ psi)
        k2 = -1j * (h2 @ (psi + 0.5 * dt * k1))
        k3 = -1j * (h2 @ (psi + 0.5 * dt * k2))
        k4 = -1j * (h4 @ (psi + dt * k3))
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[step + 1] = psi
    return states


# --- cyclic Jacobi for complex Hermitian matrices ------------------------------

def _jacobi_sweeps(a, off_tol, max_sweeps):
    """Diagonalize Hermitian a in place by unitary 2x2 rotations until the
    off-diagonal Frobenius mass drops below off_tol. Returns (eigvals,
    eigvecs, converged)."""
    n = a.shape[0]
    vecs = np.eye(n, dtype=np.complex128)
    converged = False
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if math.sqrt(2.0 * off) <= off_tol:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                alpha = apq / r  # unit phase of the pivot
                theta = 0.5 * math.atan2(2.0 * r, a[q, q].real - a[p, p].real)
                c = math.cos(theta)
                s = math.sin(theta)
                app = a[p, p].real
                aqq = a[q, q].real
                a[p, p] = c * c * app + s * s * aqq - 2.0 * c * s * r
                a[q, q] = s * s * app + c * c * aqq + 2.0 * c * s * r
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * alpha.conjugate() * akq
                    a[p, k] = a[k, p].conjugate()
                    a[k, q] = s * alpha * akp + c * akq
                    a[q, k] = a[k, q].conjugate()
                for k in range(n):
                    vkp = vecs[k, p]
                    vkq = vecs[k, q]
                    vecs[k, p] = c * vkp - s * alpha.conjugate() * vkq
                    vecs[k, q] = s * alpha * vkp + c * vkq
    vals = np.empty(n, dtype=np.float64)
    for i in range(n):
        vals[i] = a[i, i].real
    return vals, vecs, converged


if NUMBA_ENABLED:
    _deriv = _njit(cache=True)(_deriv_loops)
    _rk4_impl = _njit(cache=True)(_rk4_loops)
    _jacobi_impl = _njit(cache=True)(_jacobi_sweeps)
else:
    _deriv = _deriv_loops
    _rk4_impl = _rk4_numpy
    _jacobi_impl = _jacobi_sweeps


def rk4_propagate(diag, rows, cols, amps, freqs, psi0, dt, n_steps) -> np.ndarray:
    """States at t = 0, dt, ..., n_steps*dt; shape (n_steps + 1, N)."""
    return _rk4_impl(
        np.ascontiguousarray(diag, dtype=np.float64),
        np.ascontiguousarray(rows, dtype=np.int64),
        np.ascontiguousarray(cols, dtype=np.int64),
        np.ascontiguousarray(amps, dtype=np.complex128),
        np.ascontiguousarray(freqs, dtype=np.float64),
        np.ascontiguousarray(psi0, dtype=np.complex128),
        float(dt),
        int(n_steps),
    )


def jacobi_eigh(
    m: np.ndarray, off_tol_rel: float = 1e-14, max_sweeps: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector columns of a complex Hermitian
    matrix, via cyclic Jacobi sweeps; m = V diag(w) V^dagger."""
    a = np.array(m, dtype=np.complex128, order="C", copy=True)
    fro = float(np.linalg.norm(a))
    if fro == 0.0:
        return np.zeros(a.shape[0]), np.eye(a.shape[0], dtype=np.complex128)
    vals, vecs, converged = _jacobi_impl(a, off_tol_rel * fro, max_sweeps)
    if not converged:
        raise RuntimeError(f"Jacobi sweeps did not converge in {max_sweeps} sweeps")
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]
