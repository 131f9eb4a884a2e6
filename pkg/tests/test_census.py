import pytest

import rotframe as rf
from helpers import E, O
from rotframe.census import ParityPattern


def pat(text):
    return ParityPattern(tuple(text))


def test_enumerate_two_levels():
    patterns = rf.enumerate_patterns(2)
    assert [p.as_string() for p in patterns] == ["ee", "eo"]


def test_enumerate_counts_and_canonical_flag():
    for n in (1, 3, 4, 6):
        patterns = rf.enumerate_patterns(n)
        assert len(patterns) == 2 ** (n - 1)
        assert all(p.canonical for p in patterns)
        assert len({p.as_string() for p in patterns}) == len(patterns)


def test_enumerate_range_check():
    with pytest.raises(ValueError):
        rf.enumerate_patterns(0)
    with pytest.raises(ValueError):
        rf.enumerate_patterns(13)


def test_four_level_one_odd_patterns():
    singles = [p for p in rf.enumerate_patterns(4) if p.minority_count == 1]
    assert len(singles) == 4
    assert {p.as_string() for p in singles} == {"eooo", "eoee", "eeoe", "eeeo"}


def test_canonicalization_quotients_global_flip():
    p = pat("oeee")
    assert not p.canonical
    assert p.canonicalized().as_string() == "eooo"
    assert p.canonicalized() == p.canonicalized().canonicalized()


def test_name_topology_hub_positions():
    assert rf.name_topology(pat("eooo")) == "W"
    assert rf.name_topology(pat("oeee")) == "W"  # flip-equivalent
    assert rf.name_topology(pat("eoee")) == "Y"
    assert rf.name_topology(pat("eeoe")) == "lambda"
    assert rf.name_topology(pat("eeeo")) == "M"


def test_name_topology_two_two():
    assert rf.name_topology(pat("eooe")) == "diamond"
    assert rf.name_topology(pat("eoeo")) == "trapezium"
    assert rf.name_topology(pat("eeoo")) == "hourglass"
    assert rf.name_topology(pat("oeoe")) == "trapezium"  # flip-equivalent


def test_name_topology_other_sizes_and_uniform():
    assert rf.name_topology(pat("eeee")) is None
    assert rf.name_topology(pat("eo")) is None
    assert rf.name_topology(pat("eeoeo")) is None


def test_named_system_graphs():
    lam = rf.named_system("lambda")
    assert [t.pair for t in lam.transitions] == [(1, 3), (2, 3), (3, 4)]
    diamond = rf.named_system("diamond")
    assert [t.pair for t in diamond.transitions] == [(1, 2), (1, 3), (2, 4), (3, 4)]
    with pytest.raises(ValueError):
        rf.named_system("pentagon")


def test_census_four_levels():
    records = rf.census(4)
    assert len(records) == 8
    by_name = {r.name: r for r in records if r.name}
    for hub in ("W", "Y", "lambda", "M"):
        assert by_name[hub].verdict is rf.Verdict.UNCONDITIONAL
        assert by_name[hub].detuning_count == 0
        assert by_name[hub].n_transitions == 3
    for shape in ("diamond", "trapezium", "hourglass"):
        assert by_name[shape].verdict is rf.Verdict.CONDITIONAL
        assert by_name[shape].detuning_count == 1
    bare = next(r for r in records if r.pattern.as_string() == "eeee")
    assert bare.name is None
    assert bare.n_transitions == 0
    assert bare.verdict is rf.Verdict.UNCONDITIONAL


def test_census_2_3_patterns_have_two_detunings():
    for r in rf.census(5):
        if r.pattern.minority_count == 2:
            assert r.detuning_count == 2
            assert r.verdict is rf.Verdict.CONDITIONAL


def test_one_minority_level_always_unconditional():
    for n in range(4, 9):
        records = [r for r in rf.census(n) if r.pattern.minority_count == 1]
        assert len(records) == n
        assert all(r.verdict is rf.Verdict.UNCONDITIONAL for r in records)
        assert all(r.detuning_count == 0 for r in records)


def test_detuning_count_is_cyclomatic_number():
    for n in range(2, 8):
        for r in rf.census(n):
            n_even = r.pattern.n_even
            edges = n_even * (n - n_even)
            if r.pattern.minority_count == 0:
                assert r.detuning_count == 0
            else:
                assert r.detuning_count == edges - n + 1


def test_census_flip_stability():
    # classifying the flipped (non-canonical) pattern gives the same verdict
    # and counts as the canonical record
    for record in rf.census(4):
        flipped = record.pattern.flipped()
        result = rf.classify(rf.pattern_system(flipped))
        assert result.verdict is record.verdict
        assert len(result.detunings) == record.detuning_count


def test_census_is_deterministic():
    a = rf.census(5)
    b = rf.census(5)
    assert a == b


def test_generic_offsets_stay_small_and_nonzero():
    for pattern in rf.enumerate_patterns(6):
        system = rf.pattern_system(pattern)
        tol = rf.detuning_tolerance(system)
        gaps = {t.pair: t.laser for t in rf.pattern_system(pattern, detuned=False).transitions}
        max_gap = max((abs(g) for g in gaps.values()), default=1.0)
        for tr in system.transitions:
            offset = tr.laser - gaps[tr.pair]
            assert 0 < abs(offset) <= 1e-3 * max_gap
        for d in rf.detuning_expressions(system):
            assert abs(d.value) > 10 * tol
