"""Toolkit for exact and phenomenological expressions of the n-th prime.

Three formula families are implemented and profiled against a sieve oracle:

* an exact discrete-sieving identity whose harmonic-sum certificate is
  carried in exact rational arithmetic (`sieve_identity`),
* Gandhi's inclusion-exclusion formula, evaluated exactly with a Monte
  Carlo check of its probabilistic derivation (`gandhi`),
* spectral-resonance and survival-dynamics estimators whose residuals are
  measured, never asserted (`spectral`, `survival`).

`core` holds the sieve oracle and arithmetic functions; `harness` is the
command-line entry point producing CSV/JSON reports.
"""

from .core import (
    DEFAULT_SIEVE_LIMIT,
    EstimatorRecord,
    InvariantViolation,
    PrimeTable,
    ResourceLimitError,
    log_integral,
    sieve,
)
from .gandhi import (
    GandhiEvaluation,
    evaluate,
    extract_prime,
    float_log2_extraction,
    geometric_divisibility,
    monte_carlo_survivor_fraction,
    survivor_probability,
)
from .sieve_identity import (
    CertificateReport,
    coprime_indicator,
    float_anomalies,
    harmonic_certificate,
    next_prime_via_filter,
    precision_probe,
)
from .spectral import (
    SpectralParams,
    calibrate_amplitude,
    cipolla_drift,
    oscillation_sum,
    spectral_estimate,
    spectral_sweep,
)
from .survival import (
    EULER_GAMMA,
    SelbergSolution,
    SurvivalParams,
    brun_partial,
    capacity,
    capacity_estimate,
    capacity_sweep,
    entropy,
    mertens_product,
    mertens_sweep,
    moebius_truncation_value,
    selberg_minimize,
    surprisal,
    survival_estimate,
    survival_sweep,
)

__all__ = [
    "DEFAULT_SIEVE_LIMIT",
    "EULER_GAMMA",
    "CertificateReport",
    "EstimatorRecord",
    "GandhiEvaluation",
    "InvariantViolation",
    "PrimeTable",
    "ResourceLimitError",
    "SelbergSolution",
    "SpectralParams",
    "SurvivalParams",
    "brun_partial",
    "calibrate_amplitude",
    "capacity",
    "capacity_estimate",
    "capacity_sweep",
    "cipolla_drift",
    "coprime_indicator",
    "entropy",
    "evaluate",
    "extract_prime",
    "float_anomalies",
    "float_log2_extraction",
    "geometric_divisibility",
    "harmonic_certificate",
    "log_integral",
    "mertens_product",
    "mertens_sweep",
    "moebius_truncation_value",
    "monte_carlo_survivor_fraction",
    "next_prime_via_filter",
    "oscillation_sum",
    "precision_probe",
    "selberg_minimize",
    "sieve",
    "spectral_estimate",
    "spectral_sweep",
    "surprisal",
    "survivor_probability",
    "survival_estimate",
    "survival_sweep",
]
