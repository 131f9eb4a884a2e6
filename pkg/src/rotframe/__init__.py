"""Rotating-frame time-independence analysis for laser-driven N-level systems.

Build a level system under dipole selection rules, derive the diagonal
rotating frame that removes the drive's time dependence (or the cycle
detuning conditions when none exists), and verify every answer by direct
numerical propagation.
"""

__version__ = "0.1.0"

from .census import (
    NAMED_PATTERNS,
    ParityPattern,
    TopologyRecord,
    census,
    enumerate_patterns,
    name_topology,
    named_system,
    pattern_system,
)
from .dynamics import (
    FrameResidualError,
    PropagationResult,
    basis_state,
    compare_populations,
    default_horizon,
    default_step,
    hermitian_exponential,
    propagate_frame,
    propagate_lab,
)
from .frames import (
    DETUNING_EPS_REL,
    Classification,
    DetuningExpression,
    FrameConstraintSystem,
    FrameSolution,
    TransformedHamiltonian,
    Verdict,
    build_constraints,
    classify,
    detuning_expressions,
    detuning_tolerance,
    residual_count,
    solve_frame,
    transform,
)
from .hamiltonian import (
    OscillatoryTerm,
    TimeDependentHamiltonian,
    build_rwa_hamiltonian,
    evaluate,
)
from .kernels import BACKEND, NUMBA_ENABLED, jacobi_eigh, rk4_propagate
from .model import (
    InvalidSystemError,
    Level,
    LevelSystem,
    Parity,
    Transition,
    ValidationReport,
    Violation,
    connected_components,
    full_coupling,
    load_system,
    save_system,
    system_from_dict,
    system_to_dict,
    validate,
)

__all__ = [
    "BACKEND",
    "Classification",
    "DETUNING_EPS_REL",
    "DetuningExpression",
    "FrameConstraintSystem",
    "FrameResidualError",
    "FrameSolution",
    "InvalidSystemError",
    "Level",
    "LevelSystem",
    "NAMED_PATTERNS",
    "NUMBA_ENABLED",
    "OscillatoryTerm",
    "Parity",
    "ParityPattern",
    "PropagationResult",
    "TimeDependentHamiltonian",
    "TopologyRecord",
    "TransformedHamiltonian",
    "Transition",
    "ValidationReport",
    "Verdict",
    "Violation",
    "basis_state",
    "build_constraints",
    "build_rwa_hamiltonian",
    "census",
    "classify",
    "compare_populations",
    "connected_components",
    "default_horizon",
    "default_step",
    "detuning_expressions",
    "detuning_tolerance",
    "enumerate_patterns",
    "evaluate",
    "full_coupling",
    "hermitian_exponential",
    "jacobi_eigh",
    "load_system",
    "name_topology",
    "named_system",
    "pattern_system",
    "propagate_frame",
    "propagate_lab",
    "residual_count",
    "rk4_propagate",
    "save_system",
    "solve_frame",
    "system_from_dict",
    "system_to_dict",
    "transform",
    "validate",
]
