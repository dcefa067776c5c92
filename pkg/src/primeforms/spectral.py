"""Spectral estimator: asymptotic drift plus von Mangoldt cosine resonances.

The drift term is Cipolla's five-term expansion of the n-th prime; on top
of it rides an amplitude-scaled sum of cos(2 pi n / ln k) weighted by the
von Mangoldt function and truncated at k <= floor(sqrt(drift)).  The model
is phenomenological: residuals against the sieve oracle are reported and
never asserted small, and the unresolved oscillatory tail is carried as
exactly zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import EstimatorRecord, PrimeTable


@dataclass
class SpectralParams:
    """Resonance amplitude and calibration window.

    The spectral cutoff rule k <= floor(sqrt(drift(n))) is fixed, not a
    parameter.
    """

    amplitude: float = 0.0
    calib_lo: int = 10
    calib_hi: int = 1000

    def __post_init__(self):
        if self.calib_lo < 3:
            raise ValueError("calibration window must start at n >= 3")
        if self.calib_hi <= self.calib_lo:
            raise ValueError("calibration window is empty")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")


def cipolla_drift(n: int) -> float:
    """Five-term asymptotic expansion of the n-th prime in powers of 1/ln n."""
    if n <= 1:
        raise ValueError("drift needs n >= 2 so that ln ln n is defined")
    if n == 2:
        warnings.warn("ln ln 2 < 0: the expansion is unreliable at n = 2", stacklevel=2)
    log_n = math.log(n)
    loglog = math.log(log_n)
    bracket = (
        log_n
        + loglog
        - 1.0
        + (loglog - 2.0) / log_n
        - (loglog * loglog - 6.0 * loglog + 11.0) / (2.0 * log_n * log_n)
    )
    return n * bracket


def oscillation_sum(n: int, table: PrimeTable) -> float:
    """Von Mangoldt cosine sum over 2 <= k <= floor(sqrt(drift(n))).

    Accumulation is error-compensated (exact float summation), ascending in
    k.  A cutoff below k = 2 (including negative drift at very small n)
    yields the empty sum.
    """
    if n < 3:
        raise ValueError("oscillation sum needs n >= 3")
    drift = cipolla_drift(n)
    if drift < 4.0:
        return 0.0
    cutoff = math.isqrt(int(drift))
    if cutoff > table.limit:
        raise ValueError(f"spectral cutoff {cutoff} is beyond sieve limit {table.limit}")
    ks, log_ks, weights = table.mangoldt_points(cutoff)
    if len(ks) == 0:
        return 0.0
    terms = weights * np.cos((2.0 * math.pi * n) / log_ks)
    return math.fsum(terms.tolist())


def least_squares_amplitude(residuals, oscillations) -> float:
    """Closed-form 1-D least squares: sum(r*o) / sum(o^2), 0 when degenerate."""
    denom = math.fsum(o * o for o in oscillations)
    if denom == 0.0:
        return 0.0
    return math.fsum(r * o for r, o in zip(residuals, oscillations)) / denom


def calibrate_amplitude(params: SpectralParams, table: PrimeTable) -> float:
    """Least-squares amplitude of the oscillation against oracle drift residuals.

    Fits p_n - drift(n) ~ amplitude * oscillation(n) over the calibration
    window; deterministic, fixed summation order.
    """
    if params.calib_hi > len(table.primes):
        raise ValueError(
            f"calibration window reaches n={params.calib_hi}, beyond the oracle range"
        )
    window = range(params.calib_lo, params.calib_hi + 1)
    residuals = [table.nth(n) - cipolla_drift(n) for n in window]
    oscillations = [oscillation_sum(n, table) for n in window]
    return least_squares_amplitude(residuals, oscillations)


def spectral_estimate(n: int, params: SpectralParams, table: PrimeTable) -> EstimatorRecord:
    """Drift plus amplitude-scaled resonance; the unresolved tail contributes zero."""
    if n < 3:
        raise ValueError("spectral estimate needs n >= 3")
    estimate = cipolla_drift(n) + params.amplitude * oscillation_sum(n, table)
    p_n = table.nth(n)
    residual = p_n - estimate
    return EstimatorRecord(
        n=n,
        p_n=p_n,
        estimate=estimate,
        floored=math.floor(estimate),
        residual=residual,
        rel_error=residual / p_n,
    )


def spectral_sweep(n_lo: int, n_hi: int, params: SpectralParams, table: PrimeTable) -> list[EstimatorRecord]:
    """Estimates for n in [n_lo, n_hi], ascending."""
    if n_lo < 3:
        raise ValueError("sweep needs n_lo >= 3")
    return [spectral_estimate(n, params, table) for n in range(n_lo, n_hi + 1)]
