from __future__ import annotations

import math
import warnings
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapcycles.cycle import (
    DrivingTermCensus,
    GapCycle,
    census_driving_terms,
    census_of_stage,
    enumerate_gap_cycle,
    fuse_cycle,
    fusion_chain,
    gap_cycle,
    primorial,
    totient_primorial,
)
from gapcycles.errors import CapacityError, TruncationWarning
from gapcycles.reference import CYCLE_5, CYCLE_7


def brute_census(gaps, gmax, jmax):
    n = len(gaps)
    out = Counter()
    for start in range(n):
        s = 0
        for j in range(1, jmax + 1):
            s += gaps[(start + j - 1) % n]
            if s > gmax:
                break
            out[(s, j)] += 1
    return dict(out)


def test_small_cycles():
    assert gap_cycle(3).gaps == (4, 2)
    assert gap_cycle(5).gaps == CYCLE_5
    assert gap_cycle(7).gaps == CYCLE_7


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_cycle_sum_and_length(p):
    cyc = gap_cycle(p)
    assert cyc.modulus == primorial(p)
    assert len(cyc) == totient_primorial(p)
    assert all(g % 2 == 0 and g > 0 for g in cyc)


def test_generators_are_units():
    cyc = gap_cycle(7)
    gens = cyc.generators()
    assert gens[0] == 1 and gens[-1] == 209
    assert all(math.gcd(c, 210) == 1 for c in gens)
    assert len(gens) == 48


@pytest.mark.parametrize("seg", [1, 3, 7, 64])
def test_segment_size_does_not_change_stream(seg):
    chunks = list(enumerate_gap_cycle(11, segment_size=seg))
    assert tuple(np.concatenate(chunks).tolist()) == gap_cycle(11).gaps


def test_stage_validation():
    with pytest.raises(ValueError):
        gap_cycle(9)
    with pytest.raises(ValueError):
        gap_cycle(2)
    with pytest.raises(CapacityError, match="ceiling"):
        next(enumerate_gap_cycle(31))
    with pytest.raises(CapacityError):
        next(enumerate_gap_cycle(13, ceiling=11))


def test_fusion_matches_sieve():
    cyc = gap_cycle(5)
    assert fuse_cycle(GapCycle(3, (4, 2)), 5) == cyc
    for p in (7, 11):
        nxt = fuse_cycle(cyc, p)
        assert nxt == gap_cycle(p)
        cyc = nxt


def test_fusion_chain_from_3():
    assert fusion_chain(13) == gap_cycle(13)
    with pytest.raises(ValueError):
        fusion_chain(15)


def test_fusion_rejects_skipped_stage():
    with pytest.raises(ValueError, match="stage by stage"):
        fuse_cycle(gap_cycle(5), 11)


def test_census_example_5():
    c = census_driving_terms(gap_cycle(5), gmax=6, jmax=3)
    assert c.n(2, 1) == 3 and c.n(4, 1) == 3 and c.n(6, 1) == 2
    assert c.n(6, 2) == 4
    assert c.n(4, 2) == 0
    assert (c.n(6, 1) + c.n(6, 2)) / c.n(2, 1) == 2


def test_fusion_to_11_size():
    cyc = fuse_cycle(gap_cycle(7), 11)
    assert len(cyc) == 480 and cyc.modulus == 2310


@pytest.mark.parametrize("p", [7, 11, 13])
def test_census_conservation(p):
    c = census_of_stage(p, 40, 40)
    assert sum(c.n(g, 1) for g in c.gaps()) == totient_primorial(p)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("seg", [5, 1 << 24])
def test_census_matches_brute_force(p, seg):
    gaps = gap_cycle(p).gaps
    expected = brute_census(gaps, 40, 30)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        got = census_of_stage(p, 40, 30, segment_size=seg)
    assert got.counts == expected


def test_census_of_short_cycle_wraps_repeatedly():
    c = census_driving_terms(GapCycle(3, (4, 2)), gmax=12, jmax=5)
    assert c.counts == brute_census((4, 2), 12, 5)
    assert c.n(12, 4) == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=47))
def test_census_rotation_invariant(k):
    base = census_driving_terms(gap_cycle(7), gmax=30, jmax=12)
    rot = census_driving_terms(gap_cycle(7).rotated(k), gmax=30, jmax=12)
    assert base.counts == rot.counts


def test_truncation_flag_and_warning():
    with pytest.warns(TruncationWarning):
        c = census_driving_terms(gap_cycle(7), gmax=30, jmax=3)
    assert c.truncated
    c = census_driving_terms(gap_cycle(7), gmax=30, jmax=30)
    assert not c.truncated


def test_census_text_round_trip(census13):
    text = census13.to_text()
    assert text.startswith("CENSUS v1 p=13 gmax=66 jmax=128 truncated=0\n")
    again = DrivingTermCensus.from_text(text)
    assert again == census13
    assert again.to_text() == text
    with_prov = census13.to_text("PROPAGATED from=11 to=13 mode=exact steps=1")
    assert DrivingTermCensus.from_text(with_prov) == census13


def test_census_text_rejects_garbage():
    with pytest.raises(ValueError):
        DrivingTermCensus.from_text("hello\n1 1 1\n")


def test_merge_is_pointwise_sum():
    full = census_driving_terms(gap_cycle(11), gmax=30, jmax=20)
    half = DrivingTermCensus(11, 30, 20, {k: v // 2 for k, v in full.counts.items()})
    rest = DrivingTermCensus(11, 30, 20, {k: v - v // 2 for k, v in full.counts.items()})
    assert half.merge(rest).counts == full.counts
    assert half.merge(rest) == rest.merge(half)
    with pytest.raises(ValueError):
        half.merge(DrivingTermCensus(13, 30, 20, {}))


def test_twin_count_formula():
    for p in (5, 7, 11, 13, 17):
        c = census_of_stage(p, 4, 4)
        expected = math.prod(q - 2 for q in (3, 5, 7, 11, 13, 17) if q <= p)
        assert c.n(2, 1) == c.n(4, 1) == expected


def test_vector_and_longest(census13):
    assert census13.longest(2) == 1
    v = census13.vector(30)
    assert len(v) == census13.longest(30)
    assert census13.vector(30, 3) == v[:3]
    assert census13.total(30) == sum(v)


@pytest.mark.parametrize("p", [7, 11, 13])
def test_census_totals_match_crt_count(p):
    # pairs (c, c+g) of units mod p#: q-1 choices for odd q | g, q-2 otherwise
    c = census_of_stage(p, 60, 60)
    odd = [q for q in (3, 5, 7, 11, 13) if q <= p]
    for g in range(2, 61, 2):
        expected = math.prod(q - 1 if g % q == 0 else q - 2 for q in odd)
        assert c.total(g) == expected
