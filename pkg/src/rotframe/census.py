"""Enumeration of parity patterns and classification census for fully coupled
N-level systems, including the canonical names of the seven 4-level systems.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .frames import Verdict, classify
from .model import LevelSystem, Parity, Transition, full_coupling, parse_parity

MAX_LEVELS = 12

# Named 4-level systems. For one minority-parity level the name follows the
# hub position (the level every transition touches); for 2+2 the name follows
# the shape of the energy-ordered coupling diagram.
HUB_NAMES = {1: "W", 2: "Y", 3: "lambda", 4: "M"}
TWO_TWO_NAMES = {
    ("even", "odd", "odd", "even"): "diamond",
    ("even", "odd", "even", "odd"): "trapezium",
    ("even", "even", "odd", "odd"): "hourglass",
}

NAMED_PATTERNS = {
    "W": ("even", "odd", "odd", "odd"),
    "Y": ("even", "odd", "even", "even"),
    "lambda": ("even", "even", "odd", "even"),
    "M": ("even", "even", "even", "odd"),
    "diamond": ("even", "odd", "odd", "even"),
    "trapezium": ("even", "odd", "even", "odd"),
    "hourglass": ("even", "even", "odd", "odd"),
}

# First 40 primes; sqrt(p_j) offsets make cycle sums provably irrational-free
# of exact cancellation (square roots of distinct primes are independent
# over the rationals).
_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173,
)


@dataclass(frozen=True)
class ParityPattern:
    pattern: tuple[Parity, ...]

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(parse_parity(p) for p in self.pattern))

    @property
    def n_levels(self) -> int:
        return len(self.pattern)

    @property
    def canonical(self) -> bool:
        return not self.pattern or self.pattern[0] is Parity.EVEN

    def flipped(self) -> "ParityPattern":
        return ParityPattern(tuple(p.flipped() for p in self.pattern))

    def canonicalized(self) -> "ParityPattern":
        return self if self.canonical else self.flipped()

    @property
    def n_even(self) -> int:
        return sum(1 for p in self.pattern if p is Parity.EVEN)

    @property
    def minority_count(self) -> int:
        return min(self.n_even, self.n_levels - self.n_even)

    def as_string(self) -> str:
        return "".join("e" if p is Parity.EVEN else "o" for p in self.pattern)


@dataclass(frozen=True)
class TopologyRecord:
    pattern: ParityPattern
    name: str | None
    verdict: Verdict
    detuning_count: int
    n_transitions: int
    detuning_strings: tuple[str, ...]


def enumerate_patterns(n: int) -> tuple[ParityPattern, ...]:
    """All 2^(N-1) canonical parity patterns (global flip quotiented out by
    fixing the first level even), ordered by reading e=0/o=1 as binary."""
    if not 1 <= n <= MAX_LEVELS:
        raise ValueError(f"level count must be in 1..{MAX_LEVELS}, got {n}")
    patterns = []
    for mask in range(2 ** (n - 1)):
        bits = [Parity.EVEN]
        for k in range(n - 2, -1, -1):
            bits.append(Parity.ODD if (mask >> k) & 1 else Parity.EVEN)
        patterns.append(ParityPattern(tuple(bits)))
    return tuple(patterns)


def name_topology(pattern: ParityPattern) -> str | None:
    """Canonical name of a 4-level pattern, or None for other sizes."""
    if pattern.n_levels != 4:
        return None
    canon = pattern.canonicalized()
    if canon.minority_count == 1:
        minority = Parity.ODD if canon.n_even == 3 else Parity.EVEN
        hub = next(i + 1 for i, p in enumerate(canon.pattern) if p is minority)
        return HUB_NAMES[hub]
    if canon.minority_count == 2:
        return TWO_TWO_NAMES[tuple(p.value for p in canon.pattern)]
    return None


def pattern_system(pattern: ParityPattern, detuned: bool = True) -> LevelSystem:
    """Fully coupled system for a pattern: unit level spacing and resonant
    lasers, plus (by default) small distinct sqrt-prime offsets so that no
    cycle detuning vanishes by coincidence."""
    n = pattern.n_levels
    omegas = [float(k) for k in range(n)]
    system = full_coupling(pattern.pattern, omegas)
    if not detuned or not system.transitions:
        return system
    max_gap = max(abs(tr.laser) for tr in system.transitions)
    if max_gap == 0.0:
        max_gap = 1.0
    m = len(system.transitions)
    scale = 1e-3 * max_gap / math.sqrt(_PRIMES[m])  # strictly below 1e-3*gap
    transitions = tuple(
        Transition(
            a=tr.a, b=tr.b, rabi=tr.rabi,
            laser=tr.laser + scale * math.sqrt(_PRIMES[j]),
        )
        for j, tr in enumerate(system.transitions)
    )
    return LevelSystem(levels=system.levels, transitions=transitions)


def named_system(name: str, detuned: bool = True) -> LevelSystem:
    """One of the seven named 4-level systems (W, Y, lambda, M, diamond,
    trapezium, hourglass)."""
    try:
        pattern = ParityPattern(NAMED_PATTERNS[name])
    except KeyError:
        raise ValueError(f"unknown system name {name!r}") from None
    return pattern_system(pattern, detuned=detuned)


def census(n: int) -> tuple[TopologyRecord, ...]:
    """Classify every canonical pattern's fully coupled system with generic
    laser offsets, recording verdict and detuning count."""
    records = []
    for pattern in enumerate_patterns(n):
        system = pattern_system(pattern)
        result = classify(system)
        nonzero = result.residual_pair_count
        if nonzero != len(result.detunings):
            # generic offsets are constructed so every cycle sum is nonzero
            raise RuntimeError(
                f"generic offsets produced an accidental zero detuning for "
                f"pattern {pattern.as_string()}"
            )
        records.append(
            TopologyRecord(
                pattern=pattern,
                name=name_topology(pattern),
                verdict=result.verdict,
                detuning_count=len(result.detunings),
                n_transitions=len(system.transitions),
                detuning_strings=tuple(d.as_string() for d in result.detunings),
            )
        )
    return tuple(records)
