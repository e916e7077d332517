from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gapcycles.reference import CLASS_MEANS_10, CLASS_TABLES
from gapcycles.residue import (
    asymptotic_class_ratios,
    class_gaps,
    class_mean_asymptotic,
    class_ratios,
    class_table_csv,
    digit_pair_classes,
    gap_classes,
    odd_prime_factors,
    underrepresentation,
    w_infinity,
)


def test_w_infinity_examples():
    assert w_infinity(2) == 1
    assert w_infinity(6) == 2
    assert w_infinity(10) == Fraction(4, 3)
    assert w_infinity(30) == Fraction(8, 3)
    assert w_infinity(210) == Fraction(16, 5)
    assert w_infinity(420) == Fraction(16, 5)
    for bad in (0, -2, 3):
        with pytest.raises(ValueError):
            w_infinity(bad)


@given(st.integers(1, 10**4), st.integers(0, 12))
def test_w_infinity_ignores_powers_of_two(m, a):
    m = 2 * m + 1
    assert w_infinity(2 ** (a + 1) * m) == w_infinity(2 * m)


@given(st.integers(1, 300), st.integers(1, 300))
def test_w_infinity_multiplicative(a, b):
    a, b = 2 * a + 1, 2 * b + 1
    if gcd(a, b) == 1:
        assert w_infinity(2 * a * b) == w_infinity(2 * a) * w_infinity(2 * b)


def test_odd_prime_factors():
    assert odd_prime_factors(420) == [3, 5, 7]
    assert odd_prime_factors(64) == []
    assert underrepresentation(46, 19) == Fraction(22, 21)
    assert underrepresentation(46, 23) == 1


def test_digit_pair_classes_examples():
    s3 = digit_pair_classes(3)
    assert s3.pair_map == {0: ((1, 1), (2, 2)), 1: ((1, 2),), 2: ((2, 1),)}
    s10 = digit_pair_classes(10)
    assert s10.pair_map[0] == ((1, 1), (3, 3), (7, 7), (9, 9))
    assert set(s10.pair_map) == {0, 2, 4, 6, 8}
    assert s10.class_of(9, 1) == 2
    assert len(digit_pair_classes(30).pair_map[0]) == 8
    with pytest.raises(ValueError):
        digit_pair_classes(2)


@pytest.mark.parametrize("base", [3, 8, 10, 30])
def test_pair_map_matches_reference(base):
    scheme = digit_pair_classes(base)
    for h, (pairs, _, _) in CLASS_TABLES[base].items():
        assert sorted(scheme.pair_map[h]) == sorted(pairs)


def test_class_gaps():
    assert class_gaps(10, 0, 3) == [10, 20, 30]
    assert class_gaps(10, 4, 3) == [4, 14, 24]
    assert class_gaps(3, 1, 3) == [4, 10, 16]
    assert class_gaps(3, 0, 2) == [6, 12]
    with pytest.raises(ValueError):
        class_gaps(10, 3, 2)


def test_class_means():
    assert class_mean_asymptotic(10, 0, 3) == Fraction(16, 9)
    assert class_mean_asymptotic(10, 6, 1) == 2
    assert float(class_mean_asymptotic(10, 4, 10)) == pytest.approx(1.382, abs=1e-3)
    for h, rows in CLASS_MEANS_10.items():
        for k, (g, winf, mu) in enumerate(rows, start=1):
            assert w_infinity(g) == winf
            assert float(class_mean_asymptotic(10, h, k)) == pytest.approx(mu, abs=1e-3)
    with pytest.raises(ValueError):
        class_mean_asymptotic(10, 5, 1)
    with pytest.raises(ValueError):
        class_mean_asymptotic(10, 4, 0)


@pytest.mark.parametrize("base", [3, 8, 10, 30])
def test_asymptotic_tables(base):
    agg = asymptotic_class_ratios(base, 420)
    for h, (_, _, winf) in CLASS_TABLES[base].items():
        assert float(agg.ratios[h]) == pytest.approx(winf, abs=5e-4)


def test_class_ratios_uniform_and_partition():
    values = {g: 1 for g in range(2, 61, 2)}
    agg = class_ratios(values, 10)
    assert agg.ratios == {h: 1 for h in (2, 4, 6, 8, 0)}
    agg = class_ratios({g: Fraction(g) for g in range(2, 61, 2)}, 10)
    assert sum(agg.totals.values()) == sum(range(2, 61, 2))
    with pytest.raises(ValueError, match="normalizing"):
        class_ratios({4: 1, 6: 1}, 10)
    with pytest.raises(ValueError):
        class_ratios({}, 10)


@pytest.mark.parametrize("b", [3, 5, 7, 15])
def test_odd_base_maps_onto_double(b):
    odd = asymptotic_class_ratios(b, 420).ratios
    even = asymptotic_class_ratios(2 * b, 420).ratios
    # even gap g has the same class index in base b and base 2b once reduced mod b
    assert sorted(odd.values()) == sorted(even.values())
    for h2, v in even.items():
        assert odd[h2 % b] == v


def test_gap_classes_order():
    assert gap_classes(10) == [2, 4, 6, 8, 0]
    assert gap_classes(3) == [2, 1, 0]
    assert gap_classes(8) == [2, 4, 6, 0]


def test_class_table_csv():
    text = class_table_csv(10, None, asymptotic_class_ratios(10).ratios)
    lines = text.splitlines()
    assert lines[0] == "base,h,pairs,W_current,W_infinity"
    assert lines[-1] == "10,0,(1;1) (3;3) (7;7) (9;9),,1.319165"
    assert len(lines) == 6
