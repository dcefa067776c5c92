"""Survival-dynamics tests: Mertens, entropy, Selberg, capacity, Brun."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from primeforms.survival import (
    EULER_GAMMA,
    SurvivalParams,
    brun_partial,
    capacity,
    capacity_estimate,
    capacity_sweep,
    entropy,
    entropy_integrand,
    mertens_product,
    mertens_sweep,
    moebius_truncation_value,
    quadratic_form_value,
    selberg_minimize,
    surprisal,
    survival_estimate,
    survival_sweep,
)


def test_params_pin_the_density_constant():
    assert 0.5614 < math.exp(-SurvivalParams().gamma) < 0.5615
    with pytest.raises(ValueError):
        SurvivalParams(gamma=0.5)


# -- Mertens products ---------------------------------------------------------


def test_mertens_hand_values(table):
    assert mertens_product(1, table)[0] == 0.5
    assert math.isclose(mertens_product(3, table)[0], 4 / 15, rel_tol=1e-15)


def test_mertens_recurrence(table):
    rows = mertens_sweep(10_000, table)
    for (n, product, _), (_, following, _) in zip(rows, rows[1:]):
        expected = product * (1.0 - 1.0 / table.nth(n + 1))
        assert abs(following - expected) <= 1e-15 * abs(following)


def test_mertens_product_agrees_with_sweep(table):
    rows = mertens_sweep(5_000, table)
    for n in (1, 2, 77, 1234, 5000):
        product, ratio = mertens_product(n, table)
        assert product == rows[n - 1][1]
        assert ratio == rows[n - 1][2]


# -- surprisal and entropy -------------------------------------------------------


def test_surprisal_hand_values():
    assert abs(surprisal(math.e)) < 1e-15
    assert math.isclose(surprisal(math.e**2), 1.0, rel_tol=1e-14)
    assert math.isclose(surprisal(100.0), math.log2(math.log(100.0)), rel_tol=1e-15)


@given(x=st.floats(max_value=1.0, allow_nan=False))
def test_surprisal_rejects_unit_interval(x):
    with pytest.raises(ValueError):
        surprisal(x)


def test_entropy_two_term_sum():
    sum_form, _ = entropy(3)
    p2, p3 = 1 / math.log(2), 1 / math.log(3)
    assert math.isclose(sum_form, -p2 * math.log(p2) - p3 * math.log(p3), rel_tol=1e-14)


def test_entropy_integrand_vanishes_at_e():
    assert abs(entropy_integrand(math.e)) < 1e-15


def test_entropy_sum_is_monotone():
    values = [entropy(n)[0] for n in range(3, 120)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_entropy_sum_and_integral_agree_at_scale():
    # measured gap at n = 1e4 is about 0.01%; the acceptance bound is 5%
    sum_form, integral_form = entropy(10_000)
    assert abs(sum_form - integral_form) <= 0.05 * abs(integral_form)


# -- growth-product estimator ------------------------------------------------------


def test_survival_estimate_hand_product(table):
    d2 = 2 * math.log(2) - math.log(math.log(2))
    d3 = 3 * math.log(3) - math.log(math.log(3))
    expected = 3 * math.log(3) * (1 + 1 / d2) * (1 + 1 / d3) * math.exp(-EULER_GAMMA)
    record = survival_estimate(3, SurvivalParams(), table)
    assert math.isclose(record.estimate, expected, rel_tol=1e-14)
    assert record.floored == math.floor(expected)


def test_survival_estimate_records_residual_sign_at_100(table):
    # measured: the estimator overshoots p_100 = 541 (residual < 0); recorded,
    # not asserted, since no error bound exists for this expression.
    record = survival_estimate(100, SurvivalParams(), table)
    assert math.isfinite(record.estimate) and record.estimate > 0
    assert record.residual == record.p_n - record.estimate


def test_survival_sweep_matches_per_call(table):
    params = SurvivalParams()
    sweep = survival_sweep(3, 400, params, table)
    for n in (3, 57, 400):
        record = survival_estimate(n, params, table)
        matching = next(r for r in sweep if r.n == n)
        assert math.isclose(record.estimate, matching.estimate, rel_tol=1e-12)


def test_survival_sweep_strictly_increasing(table):
    sweep = survival_sweep(3, 2_000, SurvivalParams(), table)
    assert all(b.estimate > a.estimate for a, b in zip(sweep, sweep[1:]))


# -- Selberg quadratic form ----------------------------------------------------------


def test_selberg_hand_instance():
    solution = selberg_minimize(10, 3)
    assert solution.divisors == [1, 2]
    assert solution.weights[0] == 1.0
    assert math.isclose(solution.weights[1], -1.0, abs_tol=1e-12)
    assert math.isclose(solution.minimum, 5.0, abs_tol=1e-9)  # the five odd m <= 10


def test_selberg_level_two_does_not_sieve():
    solution = selberg_minimize(30, 2)
    assert solution.divisors == [1]
    assert solution.weights == [1.0]
    assert solution.minimum == 30.0


def test_selberg_beats_moebius_truncation():
    solution = selberg_minimize(30, 5)
    assert solution.minimum <= moebius_truncation_value(30, 5) + 1e-12


def test_selberg_random_instances_kkt_and_brute_force():
    rng = random.Random(7)
    for _ in range(25):
        x = rng.randint(20, 500)
        z = rng.randint(2, 20)
        solution = selberg_minimize(x, z)
        assert solution.weights[0] == 1.0
        gradient = solution.gram @ np.asarray(solution.weights)
        assert all(abs(g) < 1e-9 for g in gradient[1:])  # KKT: free coordinates flat
        brute = quadratic_form_value(x, solution.divisors, solution.weights)
        assert abs(brute - solution.minimum) <= 1e-9 * max(1.0, brute)
        assert solution.minimum <= moebius_truncation_value(x, z) + 1e-12


def test_selberg_rejects_bad_levels():
    with pytest.raises(ValueError):
        selberg_minimize(10, 1)
    with pytest.raises(ValueError):
        selberg_minimize(5, 6)


# -- capacity ---------------------------------------------------------------------


def test_capacity_hand_values(table):
    assert capacity(2, table) == (1.0, 1.0)
    v, c = capacity(4, table)
    assert v == 2.5 and c == 0.4
    assert capacity(10, table)[0] > v


def test_capacity_estimate_small_values(table):
    record = capacity_estimate(2, table)  # z = isqrt(3) clamps to 2
    assert record.estimate == 2.0
    record_100 = capacity_estimate(100, table)
    assert math.isfinite(record_100.estimate) and record_100.estimate > 0


def test_capacity_fixed_point_variant_runs(table):
    default = capacity_estimate(100, table)
    bootstrapped = capacity_estimate(100, table, use_fixed_point=True)
    assert math.isfinite(bootstrapped.estimate) and bootstrapped.estimate > 0
    assert bootstrapped.n == default.n == 100


def test_capacity_sweep_matches_per_call(table):
    sweep = capacity_sweep(2, 300, table)
    for n in (2, 3, 50, 300):
        record = capacity_estimate(n, table)
        matching = next(r for r in sweep if r.n == n)
        assert math.isclose(record.estimate, matching.estimate, rel_tol=1e-12)


def test_capacity_sweep_strictly_increasing(table):
    sweep = capacity_sweep(2, 2_000, table)
    assert all(b.estimate > a.estimate for a, b in zip(sweep, sweep[1:]))


# -- Brun partial sums ----------------------------------------------------------------


def test_brun_hand_values(table):
    # pairs (3,5) and (5,7): 1/3 + 1/5 + 1/5 + 1/7 = 92/105
    assert math.isclose(brun_partial(10, table), float(Fraction(92, 105)), rel_tol=1e-15)
    assert brun_partial(4, table) == 0.0


def test_brun_monotone_and_bounded(table):
    checkpoints = [10, 100, 1_000, 10_000, 100_000, 1_000_000]
    values = [brun_partial(x, table) for x in checkpoints]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] < 1.903
    assert brun_partial(10**6, table) > brun_partial(10**3, table)
