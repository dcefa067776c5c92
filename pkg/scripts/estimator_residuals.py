#!/usr/bin/env python3
"""Residual profile of the three phenomenological estimators.

Sweeps spectral (calibrated and zero-amplitude), survival, and capacity
estimates against the sieve oracle and prints per-decade mean |relative
error| plus the sign balance of the survival residual (the pre-asymptotic
drift the precision discussion cares about).  Optionally dumps every
record to CSV.

Usage:
    python scripts/estimator_residuals.py --n-max 10000 --out residuals.csv
"""

import argparse
import math
import sys

from primeforms.core import DEFAULT_SIEVE_LIMIT, sieve
from primeforms.harness import REPORT_COLUMNS, _estimator_row, write_rows
from primeforms.spectral import SpectralParams, calibrate_amplitude, spectral_sweep
from primeforms.survival import SurvivalParams, capacity_sweep, survival_sweep


def decade_stats(records):
    buckets = {}
    for r in records:
        decade = 10 ** int(math.log10(r.n))
        buckets.setdefault(decade, []).append(abs(r.rel_error))
    return {d: sum(v) / len(v) for d, v in sorted(buckets.items())}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=10_000)
    parser.add_argument("--n-min", type=int, default=10)
    parser.add_argument("--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT)
    parser.add_argument("--out", default=None, help="optional CSV dump of every record")
    args = parser.parse_args(argv)

    table = sieve(args.sieve_limit)
    amplitude = calibrate_amplitude(SpectralParams(), table)
    print(f"calibrated spectral amplitude: {amplitude:.6f}")

    sweeps = {
        "spectral(calibrated)": spectral_sweep(
            args.n_min, args.n_max, SpectralParams(amplitude=amplitude), table
        ),
        "spectral(alpha=0)": spectral_sweep(args.n_min, args.n_max, SpectralParams(), table),
        "survival": survival_sweep(args.n_min, args.n_max, SurvivalParams(), table),
        "capacity": capacity_sweep(args.n_min, args.n_max, table),
    }

    for name, records in sweeps.items():
        stats = decade_stats(records)
        line = "  ".join(f"1e{int(math.log10(d))}: {v:.4f}" for d, v in stats.items())
        print(f"{name:22s} mean|rel err| by decade  {line}")

    survival_records = sweeps["survival"]
    under = sum(1 for r in survival_records if r.residual > 0)
    over = sum(1 for r in survival_records if r.residual < 0)
    print(f"survival residual sign: {under} underestimates, {over} overestimates")

    if args.out:
        rows = []
        source_names = {
            "spectral(calibrated)": "spectral",
            "spectral(alpha=0)": "spectral_alpha0",
            "survival": "survival",
            "capacity": "capacity",
        }
        for name, records in sweeps.items():
            rows.extend(_estimator_row(source_names[name], r) for r in records)
        rows.sort(key=lambda row: (row["n"], row["source"]))
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            write_rows(rows, "csv", handle, columns=REPORT_COLUMNS)
        print(f"wrote {len(rows)} records to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
