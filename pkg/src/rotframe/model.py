"""Level-system data model: levels with parity, laser-driven transitions,
dipole selection rules, and structural validation.

All frequencies are angular (rad/s in natural units, hbar = 1). Level indices
are 1-based stable identities; they need not be contiguous.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    def flipped(self) -> "Parity":
        return Parity.ODD if self is Parity.EVEN else Parity.EVEN


def parse_parity(value) -> Parity:
    if isinstance(value, Parity):
        return value
    text = str(value).strip().lower()
    if text in ("e", "even"):
        return Parity.EVEN
    if text in ("o", "odd"):
        return Parity.ODD
    raise ValueError(f"parity must be even/odd, got {value!r}")


@dataclass(frozen=True)
class Level:
    index: int
    omega: float
    parity: Parity


@dataclass(frozen=True)
class Transition:
    """One laser-driven coupling, stored on the canonical ordered pair a < b.

    The matrix element is H[a][b] = (rabi/2) * exp(-i * laser * t), with
    H[b][a] its conjugate. A physically inverted drive is encoded by the sign
    of `laser`, not by swapping the endpoints.
    """

    a: int
    b: int
    rabi: complex = 1.0 + 0.0j
    laser: float = 0.0

    def __post_init__(self):
        if self.a >= self.b:
            raise ValueError(
                f"transition endpoints must satisfy a < b, got ({self.a}, {self.b})"
            )
        object.__setattr__(self, "rabi", complex(self.rabi))
        object.__setattr__(self, "laser", float(self.laser))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class LevelSystem:
    levels: tuple[Level, ...]
    transitions: tuple[Transition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "transitions", tuple(self.transitions))

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def level_indices(self) -> tuple[int, ...]:
        return tuple(lv.index for lv in self.levels)

    def level(self, index: int) -> Level:
        for lv in self.levels:
            if lv.index == index:
                return lv
        raise KeyError(f"no level with index {index}")

    def position(self, index: int) -> int:
        """Row/column of a level index in matrix representations."""
        for i, lv in enumerate(self.levels):
            if lv.index == index:
                return i
        raise KeyError(f"no level with index {index}")

    @property
    def is_fully_coupled(self) -> bool:
        """True when exactly every opposite-parity pair is driven."""
        want = set()
        for i, lo in enumerate(self.levels):
            for hi in self.levels[i + 1 :]:
                if lo.parity != hi.parity:
                    want.add(tuple(sorted((lo.index, hi.index))))
        have = {tr.pair for tr in self.transitions}
        return have == want


class InvalidSystemError(ValueError):
    """Raised when an operation requires a well-formed system and gets one
    with validation violations."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = "; ".join(f"{v.kind}: {v.message}" for v in report.violations)
        super().__init__(f"invalid level system: {lines}")


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    degenerate: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(system: LevelSystem) -> ValidationReport:
    """Check structural well-formedness; an empty violation list means valid.

    Reported kinds: duplicate-level-index, dangling-index, duplicate-pair,
    same-parity-coupling. A system with no levels is valid but degenerate.
    """
    violations: list[Violation] = []

    seen_idx: set[int] = set()
    for lv in system.levels:
        if lv.index in seen_idx:
            violations.append(
                Violation("duplicate-level-index", f"level index {lv.index} appears twice")
            )
        seen_idx.add(lv.index)

    parity_of = {lv.index: lv.parity for lv in system.levels}
    seen_pairs: set[tuple[int, int]] = set()
    for tr in system.transitions:
        dangling = [i for i in tr.pair if i not in parity_of]
        if dangling:
            violations.append(
                Violation(
                    "dangling-index",
                    f"transition {tr.a}-{tr.b} references missing level(s) "
                    + ", ".join(str(i) for i in dangling),
                )
            )
            continue
        if tr.pair in seen_pairs:
            violations.append(
                Violation("duplicate-pair", f"transition {tr.a}-{tr.b} appears twice")
            )
        seen_pairs.add(tr.pair)
        if parity_of[tr.a] == parity_of[tr.b]:
            violations.append(
                Violation(
                    "same-parity-coupling",
                    f"transition {tr.a}-{tr.b} couples two {parity_of[tr.a].value} levels",
                )
            )

    return ValidationReport(tuple(violations), degenerate=system.n_levels == 0)


def require_valid(system: LevelSystem) -> ValidationReport:
    report = validate(system)
    if not report.ok:
        raise InvalidSystemError(report)
    return report


def full_coupling(parities, omegas) -> LevelSystem:
    """Build the system driving every opposite-parity pair and nothing else.

    Placeholder unit Rabi amplitudes; laser frequencies default to the level
    gap omega_b - omega_a. Levels are indexed 1..N in the order given.
    """
    parities = [parse_parity(p) for p in parities]
    omegas = [float(w) for w in omegas]
    if len(parities) != len(omegas):
        raise ValueError("parities and omegas must have the same length")
    if not parities:
        raise ValueError("need at least one level")

    levels = tuple(
        Level(index=i + 1, omega=w, parity=p)
        for i, (p, w) in enumerate(zip(parities, omegas))
    )
    transitions = []
    n = len(levels)
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if parities[a - 1] != parities[b - 1]:
                transitions.append(
                    Transition(a=a, b=b, rabi=1.0, laser=omegas[b - 1] - omegas[a - 1])
                )
    return LevelSystem(levels=levels, transitions=tuple(transitions))


def connected_components(system: LevelSystem) -> tuple[tuple[int, ...], ...]:
    """Partition of level indices under the transition edge set.

    Components are each sorted ascending and ordered by their smallest index.
    """
    adj: dict[int, set[int]] = {lv.index: set() for lv in system.levels}
    for tr in system.transitions:
        if tr.a in adj and tr.b in adj:
            adj[tr.a].add(tr.b)
            adj[tr.b].add(tr.a)

    seen: set[int] = set()
    comps: list[tuple[int, ...]] = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack = [start]
        comp = []
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            comp.append(v)
            stack.extend(adj[v] - seen)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


# --- system-description file format -----------------------------------------

def system_to_dict(system: LevelSystem) -> dict:
    return {
        "levels": [
            {"index": lv.index, "omega": lv.omega, "parity": lv.parity.value}
            for lv in system.levels
        ],
        "transitions": [
            {
                "a": tr.a,
                "b": tr.b,
                "rabi": {"re": tr.rabi.real, "im": tr.rabi.imag},
                "laser": tr.laser,
            }
            for tr in system.transitions
        ],
    }


def system_from_dict(data: dict) -> LevelSystem:
    levels = tuple(
        Level(
            index=int(item["index"]),
            omega=float(item["omega"]),
            parity=parse_parity(item["parity"]),
        )
        for item in data.get("levels", [])
    )
    transitions = []
    for item in data.get("transitions", []):
        rabi = item.get("rabi", {"re": 1.0, "im": 0.0})
        if isinstance(rabi, dict):
            rabi = complex(float(rabi.get("re", 0.0)), float(rabi.get("im", 0.0)))
        transitions.append(
            Transition(
                a=int(item["a"]),
                b=int(item["b"]),
                rabi=rabi,
                laser=float(item.get("laser", 0.0)),
            )
        )
    return LevelSystem(levels=levels, transitions=tuple(transitions))


def save_system(system: LevelSystem, path) -> None:
    Path(path).write_text(json.dumps(system_to_dict(system), indent=2) + "\n")


def load_system(path) -> LevelSystem:
    return system_from_dict(json.loads(Path(path).read_text()))
