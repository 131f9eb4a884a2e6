"""Structured time-dependent Hamiltonian: constant diagonal plus one
oscillatory off-diagonal term per driven transition.

Only the strict upper triangle is stored; evaluation mirrors the conjugate, so
the matrix is Hermitian by construction at every time. The structured form is
kept (rather than a closed-over callable) so frame analysis can inspect the
oscillation frequencies symbolically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LevelSystem, require_valid


@dataclass(frozen=True)
class OscillatoryTerm:
    """Entry (row, col) = amplitude * exp(-i * frequency * t), row < col by
    level index; the (col, row) entry is its conjugate."""

    row: int
    col: int
    amplitude: complex
    frequency: float


@dataclass(eq=False)
class TimeDependentHamiltonian:
    dimension: int
    level_indices: tuple[int, ...]
    diagonal: np.ndarray  # real, shape (N,)
    terms: tuple[OscillatoryTerm, ...]

    def position(self, index: int) -> int:
        try:
            return self.level_indices.index(index)
        except ValueError:
            raise KeyError(f"no level with index {index}") from None

    def evaluate(self, t: float) -> np.ndarray:
        """Dense Hermitian matrix at time t."""
        n = self.dimension
        h = np.zeros((n, n), dtype=np.complex128)
        h[np.arange(n), np.arange(n)] = self.diagonal
        for term in self.terms:
            r = self.position(term.row)
            c = self.position(term.col)
            val = term.amplitude * np.exp(-1j * term.frequency * t)
            h[r, c] = val
            h[c, r] = val.conjugate()
        return h

    def term_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(rows, cols, amplitudes, frequencies) with 0-based positions, for
        the propagation kernels."""
        rows = np.array([self.position(t.row) for t in self.terms], dtype=np.int64)
        cols = np.array([self.position(t.col) for t in self.terms], dtype=np.int64)
        amps = np.array([t.amplitude for t in self.terms], dtype=np.complex128)
        freqs = np.array([t.frequency for t in self.terms], dtype=np.float64)
        return rows, cols, amps, freqs


def build_rwa_hamiltonian(system: LevelSystem) -> TimeDependentHamiltonian:
    """Assemble the driven-system Hamiltonian: diagonal of bare level
    frequencies, and amplitude rabi/2 at frequency `laser` per transition.

    Raises InvalidSystemError when the system fails validation.
    """
    require_valid(system)
    diagonal = np.array([lv.omega for lv in system.levels], dtype=np.float64)
    terms = tuple(
        OscillatoryTerm(
            row=tr.a, col=tr.b, amplitude=0.5 * tr.rabi, frequency=tr.laser
        )
        for tr in system.transitions
    )
    return TimeDependentHamiltonian(
        dimension=system.n_levels,
        level_indices=system.level_indices,
        diagonal=diagonal,
        terms=terms,
    )


def evaluate(h: TimeDependentHamiltonian, t: float) -> np.ndarray:
    return h.evaluate(t)
