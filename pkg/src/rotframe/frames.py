"""Rotating-frame analysis of the coupling graph.

One linear constraint per driven transition (wbar_a - wbar_b = w_laser, where
wbar_n are the per-level frame frequencies of the diagonal unitary
U = sum_n exp(-i*wbar_n*t)|n><n|). A spanning forest of the coupling graph
fixes the frame up to one gauge pin per connected component; every chord edge
closes a cycle whose signed laser-frequency sum is a detuning condition. The
frame removes all time dependence exactly when every such cycle sum vanishes,
i.e. unconditionally when the graph is a forest.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .hamiltonian import OscillatoryTerm, TimeDependentHamiltonian
from .model import LevelSystem, require_valid

DETUNING_EPS_REL = 1e-9

RESIDUAL_NOTE = (
    "{k} independent cycle detunings are nonzero, so any diagonal frame leaves "
    "{k} oscillatory term pair(s). Diagonal frames compose to diagonal frames, "
    "hence repeated rotations cannot push the count below the cycle bound for "
    "these laser frequencies; fewer residual phases would require coincident "
    "detunings or a non-diagonal transform, which this analysis does not attempt."
)


class Verdict(Enum):
    UNCONDITIONAL = "UnconditionallyTimeIndependent"
    CONDITIONAL = "ConditionallyTimeIndependent"
    DISCONNECTED = "Disconnected-but-classifiable-per-component"


@dataclass(eq=False)
class FrameConstraintSystem:
    """Rows: +1 at column a, -1 at column b, rhs = laser frequency, one row
    per analyzed transition."""

    matrix: np.ndarray  # (E, N) integer
    rhs: np.ndarray  # (E,) float
    edges: tuple[tuple[int, int], ...]
    level_indices: tuple[int, ...]
    transition_rows: tuple[int, ...]  # row -> index into system.transitions


@dataclass(eq=False)
class FrameSolution:
    level_indices: tuple[int, ...]
    omega_bar: np.ndarray  # float, aligned with level_indices
    gauge: tuple[int, ...]  # one pinned level index per component

    def omega_bar_of(self, index: int) -> float:
        return float(self.omega_bar[self.level_indices.index(index)])

    def compose(self, other: "FrameSolution") -> "FrameSolution":
        """Frame whose diagonal unitary is the product of the two unitaries
        (frame frequencies add)."""
        if self.level_indices != other.level_indices:
            raise ValueError("frames are over different level sets")
        return FrameSolution(
            level_indices=self.level_indices,
            omega_bar=self.omega_bar + other.omega_bar,
            gauge=self.gauge,
        )


@dataclass(frozen=True)
class DetuningExpression:
    """Signed sum of laser frequencies around one cycle of the coupling graph.

    `coefficients` is aligned with the system's transition list (0 off the
    cycle, else +1/-1); the orientation is canonical: strictly fewer +1 than
    -1 entries, or on a tie the lexicographically largest cycle edge gets +1.
    """

    coefficients: tuple[int, ...]
    value: float
    cycle_edges: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[int, int], ...]  # transition pairs, for rendering

    def as_string(self) -> str:
        def label(pair):
            a, b = pair
            return f"w{a}{b}" if a < 10 and b < 10 else f"w{a}_{b}"

        plus = [label(p) for c, p in zip(self.coefficients, self.pairs) if c == +1]
        minus = [label(p) for c, p in zip(self.coefficients, self.pairs) if c == -1]
        if not plus and not minus:
            return "0"
        out = " + ".join(plus) if plus else "0"
        for m in minus:
            out += f" - {m}"
        return out


@dataclass(eq=False)
class Classification:
    verdict: Verdict
    detunings: tuple[DetuningExpression, ...]
    frame: FrameSolution
    tolerance: float  # absolute zero-threshold applied to detuning values
    components: tuple[tuple[int, ...], ...]
    notes: tuple[str, ...] = ()

    @property
    def nonzero_detunings(self) -> tuple[DetuningExpression, ...]:
        return tuple(d for d in self.detunings if abs(d.value) > self.tolerance)

    @property
    def residual_pair_count(self) -> int:
        return len(self.nonzero_detunings)


@dataclass(eq=False)
class TransformedHamiltonian:
    """Constant Hermitian part plus residual oscillatory entries whose
    frequencies are the unsatisfied (shifted) laser frequencies."""

    level_indices: tuple[int, ...]
    constant: np.ndarray  # (N, N) complex Hermitian
    residual: tuple[OscillatoryTerm, ...]
    omega_bar: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.level_indices)

    def position(self, index: int) -> int:
        return self.level_indices.index(index)

    def evaluate(self, t: float) -> np.ndarray:
        h = self.constant.copy()
        for term in self.residual:
            r = self.position(term.row)
            c = self.position(term.col)
            val = term.amplitude * np.exp(-1j * term.frequency * t)
            h[r, c] += val
            h[c, r] += val.conjugate()
        return h

    def as_time_dependent(self) -> TimeDependentHamiltonian:
        """Re-express as diagonal + oscillatory terms (constant off-diagonal
        entries become frequency-0 terms), e.g. to rotate a second time."""
        n = self.dimension
        diagonal = np.real(np.diag(self.constant)).copy()
        terms = []
        residual_pairs = {(t.row, t.col) for t in self.residual}
        for r in range(n):
            for c in range(r + 1, n):
                val = self.constant[r, c]
                if val != 0:
                    pair = (self.level_indices[r], self.level_indices[c])
                    if pair in residual_pairs:
                        raise ValueError(
                            f"pair {pair} has both a constant and a residual part"
                        )
                    terms.append(
                        OscillatoryTerm(
                            row=pair[0], col=pair[1], amplitude=complex(val), frequency=0.0
                        )
                    )
        terms.extend(self.residual)
        return TimeDependentHamiltonian(
            dimension=n,
            level_indices=self.level_indices,
            diagonal=diagonal,
            terms=tuple(terms),
        )


# --- internal graph machinery ------------------------------------------------

def _analysis_edges(system: LevelSystem, keep_zero_amplitude: bool):
    """[(transition_index, (a, b), laser)] with zero-amplitude drives pruned
    unless kept explicitly (they impose no physical constraint)."""
    out = []
    for j, tr in enumerate(system.transitions):
        if not keep_zero_amplitude and tr.rabi == 0:
            continue
        out.append((j, tr.pair, tr.laser))
    return out


def _components_of(level_indices, pairs):
    adj = {i: set() for i in level_indices}
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen: set[int] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack, comp = [start], []
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            comp.append(v)
            stack.extend(adj[v] - seen)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def _spanning_forest(level_indices, pairs, rng: random.Random | None = None):
    """Edge ids of a spanning forest, grown per component from its lowest
    level, always taking the lexicographically smallest frontier edge (or a
    random frontier edge when rng is given)."""
    incident: dict[int, list[int]] = {i: [] for i in level_indices}
    for e, (a, b) in enumerate(pairs):
        incident[a].append(e)
        incident[b].append(e)

    in_tree: set[int] = set()
    tree_ids: list[int] = []
    for root in sorted(level_indices):
        if root in in_tree:
            continue
        in_tree.add(root)
        while True:
            frontier = []
            for v in in_tree:
                for e in incident[v]:
                    a, b = pairs[e]
                    if (a in in_tree) != (b in in_tree):
                        frontier.append(e)
            if not frontier:
                break
            if rng is None:
                e = min(frontier, key=lambda e: pairs[e])
            else:
                e = rng.choice(sorted(set(frontier)))
            tree_ids.append(e)
            in_tree.update(pairs[e])
    chord_ids = [e for e in range(len(pairs)) if e not in set(tree_ids)]
    return tree_ids, chord_ids


def _tree_path(pairs, tree_ids, start, goal):
    """Vertex path start..goal along tree edges (BFS; unique in a forest)."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in tree_ids:
        a, b = pairs[e]
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    prev: dict[int, int] = {start: start}
    queue = [start]
    while queue:
        v = queue.pop(0)
        if v == goal:
            break
        for w, _ in adj.get(v, []):
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if goal not in prev:
        raise ValueError(f"levels {start} and {goal} are not tree-connected")
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def _cycle_expression(system, edges, tree_ids, chord_entry):
    """DetuningExpression for the cycle closed by one chord edge."""
    pairs = [pair for _, pair, _ in edges]
    j_chord, (a, b), _ = chord_entry

    coeff_by_tr = [0] * len(system.transitions)
    coeff_by_tr[j_chord] = +1
    path = _tree_path(pairs, tree_ids, a, b)
    pair_to_edge = {pairs[e]: e for e in range(len(pairs))}
    cycle_tr_ids = [j_chord]
    for u, v in zip(path[:-1], path[1:]):
        pair = (u, v) if u < v else (v, u)
        e = pair_to_edge[pair]
        j = edges[e][0]
        cycle_tr_ids.append(j)
        # wbar_a - wbar_b telescopes over the path; moving the laser sums to
        # the detuning side flips the sign of ascending steps
        coeff_by_tr[j] = -1 if u < v else +1

    cycle_pairs = [system.transitions[j].pair for j in cycle_tr_ids]
    plus = sum(1 for j in cycle_tr_ids if coeff_by_tr[j] == +1)
    minus = len(cycle_tr_ids) - plus
    flip = False
    if plus > minus:
        flip = True
    elif plus == minus:
        top = max(cycle_pairs)
        j_top = next(j for j in cycle_tr_ids if system.transitions[j].pair == top)
        flip = coeff_by_tr[j_top] == -1
    if flip:
        for j in cycle_tr_ids:
            coeff_by_tr[j] = -coeff_by_tr[j]

    value = 0.0
    for j, tr in enumerate(system.transitions):
        if coeff_by_tr[j]:
            value += coeff_by_tr[j] * tr.laser

    return DetuningExpression(
        coefficients=tuple(coeff_by_tr),
        value=value,
        cycle_edges=_ordered_cycle(
            {system.transitions[j].pair: coeff_by_tr[j] for j in cycle_tr_ids}
        ),
        pairs=tuple(tr.pair for tr in system.transitions),
    )


def _ordered_cycle(signed_pairs: dict[tuple[int, int], int]):
    """Walk the cycle in its oriented direction starting from its lowest
    level; +1 edges are walked low-to-high."""
    arc = {}
    for (a, b), sign in signed_pairs.items():
        if sign == +1:
            arc[a] = (b, (a, b))
        else:
            arc[b] = (a, (a, b))
    start = min(v for v, _ in arc.items())
    walk = []
    v = start
    while True:
        v, pair = arc[v]
        walk.append(pair)
        if v == start:
            break
    return tuple(walk)


def detuning_tolerance(system: LevelSystem, eps_rel: float = DETUNING_EPS_REL) -> float:
    """Absolute zero-threshold: eps_rel times the largest |laser frequency|."""
    lasers = [abs(tr.laser) for tr in system.transitions]
    return eps_rel * (max(lasers) if lasers else 0.0)


def _default_gauge(components):
    return tuple(comp[0] for comp in components)


def _check_gauge(gauge, components):
    gauge = tuple(gauge)
    by_comp = {comp: [g for g in gauge if g in comp] for comp in components}
    for comp, pins in by_comp.items():
        if len(pins) != 1:
            raise ValueError(
                f"gauge must pin exactly one level per component; component "
                f"{comp} got {pins or 'none'}"
            )
    covered = {g for pins in by_comp.values() for g in pins}
    stray = [g for g in gauge if g not in covered]
    if stray:
        raise ValueError(f"gauge indices {stray} are not levels of the system")
    return gauge


# --- public operations --------------------------------------------------------

def build_constraints(
    system: LevelSystem, keep_zero_amplitude: bool = False
) -> FrameConstraintSystem:
    """Linear system over the frame frequencies, one row per transition."""
    require_valid(system)
    edges = _analysis_edges(system, keep_zero_amplitude)
    level_indices = system.level_indices
    col = {idx: k for k, idx in enumerate(level_indices)}
    matrix = np.zeros((len(edges), len(level_indices)), dtype=np.int64)
    rhs = np.zeros(len(edges), dtype=np.float64)
    for row, (_, (a, b), laser) in enumerate(edges):
        matrix[row, col[a]] = +1
        matrix[row, col[b]] = -1
        rhs[row] = laser
    return FrameConstraintSystem(
        matrix=matrix,
        rhs=rhs,
        edges=tuple(pair for _, pair, _ in edges),
        level_indices=level_indices,
        transition_rows=tuple(j for j, _, _ in edges),
    )


def _solve_on_forest(level_indices, edges, tree_ids, gauge) -> FrameSolution:
    pairs = [pair for _, pair, _ in edges]
    adj: dict[int, list[tuple[int, int, float]]] = {i: [] for i in level_indices}
    for e in tree_ids:
        a, b = pairs[e]
        w = edges[e][2]
        adj[a].append((b, -1, w))  # wbar_b = wbar_a - w
        adj[b].append((a, +1, w))  # wbar_a = wbar_b + w

    wbar: dict[int, float] = {}
    for root in gauge:
        wbar[root] = 0.0
        stack = [root]
        while stack:
            v = stack.pop()
            for u, sign, w in adj[v]:
                if u not in wbar:
                    wbar[u] = wbar[v] + sign * w
                    stack.append(u)

    omega_bar = np.array([wbar[idx] for idx in level_indices], dtype=np.float64)
    return FrameSolution(
        level_indices=tuple(level_indices), omega_bar=omega_bar, gauge=tuple(gauge)
    )


def solve_frame(
    system: LevelSystem,
    gauge=None,
    keep_zero_amplitude: bool = False,
    rng: random.Random | None = None,
) -> FrameSolution:
    """Frame frequencies satisfying every spanning-forest constraint exactly,
    with one level pinned to 0 per connected component."""
    require_valid(system)
    edges = _analysis_edges(system, keep_zero_amplitude)
    pairs = [pair for _, pair, _ in edges]
    components = _components_of(system.level_indices, pairs)
    gauge = _default_gauge(components) if gauge is None else _check_gauge(gauge, components)
    tree_ids, _ = _spanning_forest(system.level_indices, pairs, rng=rng)
    return _solve_on_forest(system.level_indices, edges, tree_ids, gauge)


def detuning_expressions(
    system: LevelSystem,
    keep_zero_amplitude: bool = False,
    rng: random.Random | None = None,
    eps_rel: float = DETUNING_EPS_REL,
) -> tuple[DetuningExpression, ...]:
    """One canonical cycle expression per chord of the spanning forest; a
    forest-shaped system yields an empty tuple."""
    return classify(
        system, keep_zero_amplitude=keep_zero_amplitude, rng=rng, eps_rel=eps_rel
    ).detunings


def classify(
    system: LevelSystem,
    gauge=None,
    eps_rel: float = DETUNING_EPS_REL,
    keep_zero_amplitude: bool = False,
    rng: random.Random | None = None,
) -> Classification:
    """Frame, cycle detunings, and the time-independence verdict.

    The verdict is unconditional exactly when the coupling graph is a forest;
    a connected graph with cycles is conditional; a disconnected graph with
    cycles is classified per component.
    """
    require_valid(system)
    edges = _analysis_edges(system, keep_zero_amplitude)
    pairs = [pair for _, pair, _ in edges]
    components = _components_of(system.level_indices, pairs)
    gauge_t = _default_gauge(components) if gauge is None else _check_gauge(gauge, components)

    tree_ids, chord_ids = _spanning_forest(system.level_indices, pairs, rng=rng)
    frame = _solve_on_forest(system.level_indices, edges, tree_ids, gauge_t)
    tolerance = detuning_tolerance(system, eps_rel)
    detunings = tuple(
        _cycle_expression(system, edges, tree_ids, edges[e]) for e in chord_ids
    )

    if not chord_ids:
        verdict = Verdict.UNCONDITIONAL
    elif len(components) == 1:
        verdict = Verdict.CONDITIONAL
    else:
        verdict = Verdict.DISCONNECTED

    notes = []
    if verdict is Verdict.DISCONNECTED:
        notes.append(
            f"{len(components)} disconnected components; each component's "
            "frame and detunings are independent"
        )
    nonzero = sum(1 for d in detunings if abs(d.value) > tolerance)
    if nonzero >= 2:
        notes.append(RESIDUAL_NOTE.format(k=nonzero))

    return Classification(
        verdict=verdict,
        detunings=detunings,
        frame=frame,
        tolerance=tolerance,
        components=components,
        notes=tuple(notes),
    )


def residual_count(system: LevelSystem, eps_rel: float = DETUNING_EPS_REL) -> int:
    """Number of oscillatory term pairs no diagonal frame can remove: the
    cycle-basis elements whose detuning value is above tolerance.

    For generic laser frequencies this equals the cyclomatic number of the
    coupling graph; specially tuned (coincident) detunings can only lower it.
    """
    return classify(system, eps_rel=eps_rel).residual_pair_count


def transform(
    h: TimeDependentHamiltonian,
    frame: FrameSolution,
    eps_rel: float = DETUNING_EPS_REL,
) -> TransformedHamiltonian:
    """Rotate into the frame: diagonal becomes omega_n - wbar_n, each term's
    frequency shifts by wbar_row - wbar_col, and terms whose shifted frequency
    is below tolerance fold into the constant matrix."""
    if tuple(frame.level_indices) != tuple(h.level_indices):
        raise ValueError("frame and Hamiltonian are over different level sets")
    n = h.dimension
    om = np.asarray(frame.omega_bar, dtype=np.float64)
    constant = np.zeros((n, n), dtype=np.complex128)
    constant[np.arange(n), np.arange(n)] = h.diagonal - om

    freqs = [abs(t.frequency) for t in h.terms]
    tol = eps_rel * (max(freqs) if freqs else 0.0)

    residual = []
    for term in h.terms:
        r = h.position(term.row)
        c = h.position(term.col)
        shifted = term.frequency - (om[r] - om[c])
        if abs(shifted) <= tol:
            constant[r, c] += term.amplitude
            constant[c, r] += term.amplitude.conjugate()
        else:
            residual.append(
                OscillatoryTerm(
                    row=term.row, col=term.col, amplitude=term.amplitude,
                    frequency=shifted,
                )
            )
    return TransformedHamiltonian(
        level_indices=h.level_indices,
        constant=constant,
        residual=tuple(residual),
        omega_bar=om.copy(),
    )
