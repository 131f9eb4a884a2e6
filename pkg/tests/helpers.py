"""Shared builders for the test suite."""
from collections import Counter

import numpy as np

import rotframe as rf
from rotframe.model import Level, LevelSystem, Parity, Transition

E, O = rf.Parity.EVEN, rf.Parity.ODD


def two_level(w1=0.25, w2=1.0, rabi=0.8 + 0j, laser=None):
    """laser defaults to the physically resonant value w1 - w2 (the stored
    upper-triangle phase is exp(-i*laser*t))."""
    if laser is None:
        laser = w1 - w2
    return LevelSystem(
        levels=(Level(1, w1, E), Level(2, w2, O)),
        transitions=(Transition(1, 2, rabi=rabi, laser=laser),),
    )


def lambda_system(lasers=(2.25, 1.5, 1.25)):
    """Two near-degenerate low levels coupled to a shared upper level, plus a
    fourth above it; dyadic laser values so tree solves are float-exact."""
    w13, w23, w34 = lasers
    return LevelSystem(
        levels=(
            Level(1, 0.0, E),
            Level(2, 0.25, E),
            Level(3, 2.0, O),
            Level(4, 3.5, E),
        ),
        transitions=(
            Transition(1, 3, rabi=1.0, laser=w13),
            Transition(2, 3, rabi=1.0, laser=w23),
            Transition(3, 4, rabi=1.0, laser=w34),
        ),
    )


def with_random_rabi(system, seed, lo=0.25, hi=0.5):
    """Same coupling graph with random Rabi magnitudes and phases."""
    rng = np.random.default_rng(seed)
    transitions = tuple(
        Transition(
            tr.a,
            tr.b,
            rabi=rng.uniform(lo, hi) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)),
            laser=tr.laser,
        )
        for tr in system.transitions
    )
    return LevelSystem(system.levels, transitions)


def with_laser_offsets(system, seed, scale=0.05):
    rng = np.random.default_rng(seed)
    transitions = tuple(
        Transition(tr.a, tr.b, rabi=tr.rabi, laser=tr.laser + rng.uniform(-scale, scale))
        for tr in system.transitions
    )
    return LevelSystem(system.levels, transitions)


def zero_detuned(system):
    """Retune one laser per cycle expression so every detuning vanishes."""
    exprs = rf.detuning_expressions(system)
    if not exprs:
        return system
    lasers = {tr.pair: tr.laser for tr in system.transitions}
    counts = Counter(
        j for d in exprs for j, c in enumerate(d.coefficients) if c
    )
    for d in exprs:
        own = [j for j, c in enumerate(d.coefficients) if c and counts[j] == 1]
        j = own[-1]
        value = sum(
            c * lasers[p] for c, p in zip(d.coefficients, d.pairs) if c
        )
        lasers[d.pairs[j]] -= value / d.coefficients[j]
    transitions = tuple(
        Transition(tr.a, tr.b, rabi=tr.rabi, laser=lasers[tr.pair])
        for tr in system.transitions
    )
    retuned = LevelSystem(system.levels, transitions)
    tol = rf.detuning_tolerance(retuned)
    assert all(abs(d.value) <= tol for d in rf.detuning_expressions(retuned))
    return retuned


def k23_system(seed=None):
    """Fully coupled 2+3 five-level system (two independent cycles)."""
    pattern = rf.ParityPattern((E, E, O, O, O))
    system = rf.pattern_system(pattern)
    if seed is not None:
        system = with_random_rabi(system, seed)
    return system
