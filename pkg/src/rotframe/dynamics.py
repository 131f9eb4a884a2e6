"""Numerical verification of frame transforms: fixed-step RK4 propagation in
the lab frame against exact matrix-exponential evolution in the rotated frame.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frames import FrameSolution, transform
from .hamiltonian import TimeDependentHamiltonian
from .kernels import jacobi_eigh, rk4_propagate

DEFAULT_STEP_DIVISOR = 2000
HERMITICITY_TOL = 1e-12


class FrameResidualError(RuntimeError):
    """Frame propagation refused: the transformed Hamiltonian still carries
    oscillatory terms, so it is not time-independent."""


@dataclass(eq=False)
class PropagationResult:
    times: np.ndarray  # (T,)
    states: np.ndarray  # (T, N) complex amplitudes
    norm_drift: float  # max |  ||psi|| - 1  | over the run

    def populations(self) -> np.ndarray:
        return np.abs(self.states) ** 2


def default_horizon(h: TimeDependentHamiltonian) -> float:
    """10 / (smallest nonzero Rabi magnitude), covering several slow Rabi
    cycles; 1.0 when nothing is driven."""
    mags = [2.0 * abs(t.amplitude) for t in h.terms if t.amplitude != 0]
    return 10.0 / min(mags) if mags else 1.0


def default_step(h: TimeDependentHamiltonian, horizon: float) -> float:
    """Shortest characteristic period divided by DEFAULT_STEP_DIVISOR."""
    f_max = 0.0
    if h.dimension:
        f_max = float(np.max(np.abs(h.diagonal)))
    for term in h.terms:
        f_max = max(f_max, abs(term.frequency), abs(term.amplitude))
    t_min = min(2.0 * math.pi / f_max, horizon) if f_max > 0 else horizon
    return t_min / DEFAULT_STEP_DIVISOR


def _time_grid(t_final: float, step: float) -> tuple[int, float]:
    if not (t_final > 0):
        raise ValueError("t_final must be positive")
    if not (step > 0):
        raise ValueError("step must be positive")
    n_steps = max(1, int(math.ceil(t_final / step - 1e-9)))
    return n_steps, t_final / n_steps


def _check_initial(psi0, dimension: int) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (dimension,):
        raise ValueError(f"initial state must have shape ({dimension},)")
    norm = float(np.linalg.norm(psi0))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"initial state must be normalized, got norm {norm}")
    return psi0


def basis_state(h: TimeDependentHamiltonian, level_index: int) -> np.ndarray:
    psi = np.zeros(h.dimension, dtype=np.complex128)
    psi[h.position(level_index)] = 1.0
    return psi


def propagate_lab(
    h: TimeDependentHamiltonian,
    psi0,
    t_final: float | None = None,
    step: float | None = None,
) -> PropagationResult:
    """Classic 4th-order Runge-Kutta with fixed step on i dpsi/dt = H(t) psi."""
    if t_final is None:
        t_final = default_horizon(h)
    if step is None:
        step = default_step(h, t_final)
    psi0 = _check_initial(psi0, h.dimension)
    n_steps, dt = _time_grid(t_final, step)

    rows, cols, amps, freqs = h.term_arrays()
    states = rk4_propagate(h.diagonal, rows, cols, amps, freqs, psi0, dt, n_steps)
    if not np.all(np.isfinite(states.view(np.float64))):
        bad = int(np.argmax(~np.all(np.isfinite(states.view(np.float64)), axis=1)))
        raise RuntimeError(
            f"propagation produced non-finite amplitudes near t = {bad * dt:.6g}; "
            "reduce the step size"
        )
    times = dt * np.arange(n_steps + 1)
    norms = np.linalg.norm(states, axis=1)
    return PropagationResult(
        times=times, states=states, norm_drift=float(np.max(np.abs(norms - 1.0)))
    )


def hermitian_exponential(m: np.ndarray, t: float) -> np.ndarray:
    """exp(-i m t) for Hermitian m, via the Jacobi eigendecomposition."""
    m = np.asarray(m, dtype=np.complex128)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if float(np.max(np.abs(m - m.conj().T))) > HERMITICITY_TOL * max(scale, 1e-300):
        raise ValueError("matrix is not Hermitian")
    vals, vecs = jacobi_eigh(m)
    phases = np.exp(-1j * vals * t)
    return (vecs * phases) @ vecs.conj().T


def propagate_frame(
    h: TimeDependentHamiltonian,
    frame: FrameSolution,
    psi0,
    t_final: float | None = None,
    step: float | None = None,
) -> PropagationResult:
    """psi(t) = U(t) exp(-i H' t) psi(0) on the same grid propagate_lab would
    use, where H' is the (time-independent) transformed Hamiltonian.

    Refuses with FrameResidualError when the frame leaves residual
    oscillatory terms.
    """
    if t_final is None:
        t_final = default_horizon(h)
    if step is None:
        step = default_step(h, t_final)
    psi0 = _check_initial(psi0, h.dimension)
    n_steps, dt = _time_grid(t_final, step)

    rotated = transform(h, frame)
    if rotated.residual:
        pairs = ", ".join(f"{t.row}-{t.col}" for t in rotated.residual)
        raise FrameResidualError(
            f"frame leaves residual oscillatory terms on transition(s) {pairs}; "
            "the system is not time-independent in this frame"
        )

    vals, vecs = jacobi_eigh(rotated.constant)
    times = dt * np.arange(n_steps + 1)
    coeffs = vecs.conj().T @ psi0
    rotated_states = (np.exp(-1j * np.outer(times, vals)) * coeffs) @ vecs.T
    states = rotated_states * np.exp(-1j * np.outer(times, frame.omega_bar))
    norms = np.linalg.norm(states, axis=1)
    return PropagationResult(
        times=times, states=states, norm_drift=float(np.max(np.abs(norms - 1.0)))
    )


def compare_populations(a: PropagationResult, b: PropagationResult) -> float:
    """Max over times and levels of the population difference."""
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise ValueError("propagation results are on different time grids")
    return float(np.max(np.abs(a.populations() - b.populations())))
