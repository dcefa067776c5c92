"""Filter, survivor scan, and exact certificate tests."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primeforms.sieve_identity import (
    coprime_indicator,
    float_anomalies,
    harmonic_certificate,
    next_prime_via_filter,
    precision_probe,
)


def test_filter_hand_values(table):
    assert coprime_indicator(7, 2, table) == 1  # 7 coprime to 6
    assert coprime_indicator(9, 2, table) == 0  # 3 | 9
    with pytest.raises(ValueError):
        coprime_indicator(0, 1, table)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 1000))
def test_filter_passes_one_for_any_n(table, n):
    assert coprime_indicator(1, n, table) == 1


def test_filter_dual_paths_agree_exhaustively(table):
    # coprime_indicator raises on any Möbius-vs-gcd disagreement, so a clean
    # full sweep over n <= 500, m <= 2 p_n is the agreement proof.
    for n in range(1, 501):
        bound = 2 * table.nth(n)
        for m in range(1, bound + 1):
            coprime_indicator(m, n, table)


def test_filter_vanishes_strictly_between_one_and_next_prime(table):
    for n in range(1, 101):
        next_p = table.nth(n + 1)
        for m in range(2, next_p):
            assert coprime_indicator(m, n, table) == 0, (n, m)


def test_next_prime_hand_values(table):
    assert next_prime_via_filter(1, table) == 3
    assert next_prime_via_filter(2, table) == 5
    assert next_prime_via_filter(25, table) == 101  # p_25 = 97


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 500))
def test_next_prime_matches_oracle(table, n):
    assert next_prime_via_filter(n, table) == table.nth(n + 1)


def test_survivor_above_one_is_not_always_unique(table):
    # The minimal-survivor characterization holds, but survivors above 1 in
    # [1, 2 p_n] need not be unique: at n = 4 both 11 and 13 pass the filter
    # (13 <= 2 * 7), so only the minimum and the floor identity are contracts.
    assert coprime_indicator(11, 4, table) == 1
    assert coprime_indicator(13, 4, table) == 1
    assert 13 <= 2 * table.nth(4)
    assert next_prime_via_filter(4, table) == 11


def test_certificate_hand_values(table):
    c1 = harmonic_certificate(1, table)
    assert c1.exact_sum == Fraction(4, 3)
    assert c1.exact_floor == 1
    assert c1.margin == Fraction(1, 3)
    assert c1.next_prime == 3

    # survivors of [1, 2 p_2] = [1, 6] coprime to 6 are 1 and 5
    c2 = harmonic_certificate(2, table)
    assert c2.exact_sum == Fraction(6, 5)
    assert c2.exact_floor == 1
    assert c2.margin == Fraction(1, 5)
    assert c2.next_prime == 5


def test_certificate_n100_floor_is_one(table):
    report = harmonic_certificate(100, table)
    assert report.exact_floor == 1
    assert report.violations() == []


def test_margin_bounds_small_sweep(table):
    ln2 = math.log(2.0)
    for n in range(1, 51):
        report = harmonic_certificate(n, table)
        lower = Fraction(1, report.next_prime)
        assert report.margin >= lower  # exact comparison
        assert float(report.margin - lower) < ln2 + 1e-12


def test_margin_includes_next_prime_term(table):
    for n in (1, 5, 42, 300):
        report = harmonic_certificate(n, table)
        assert report.margin >= Fraction(1, report.next_prime)


def test_probe_small_values(table):
    reports = precision_probe(3, table)
    assert [r.n for r in reports] == [1, 2, 3]
    assert abs(reports[0].float_margin - 1 / 3) < 1e-15
    assert float_anomalies(reports) == []


def test_probe_rejects_empty_range(table):
    with pytest.raises(ValueError):
        precision_probe(0, table)


def test_scan_range_error_beyond_limit(small_table):
    # 2 p_n above the sieve limit must be refused, not silently truncated
    n_limit = len(small_table.primes)
    with pytest.raises(ValueError):
        next_prime_via_filter(n_limit, small_table)
