"""Command-line harness: sweeps, CSV/JSON reports, precision study, benchmarks.

The report schema is frozen (see REPORT_COLUMNS and the README): every row
carries a `source` naming its producer and the row's n; exact rationals are
serialized as "numerator/denominator" strings, never as floats, because
float serialization is precisely the failure mode the precision study
documents.  Exit codes: 0 success, 1 exact-module invariant violation,
2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import core, gandhi, sieve_identity, spectral, survival

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

COMMANDS = ("sieve-next", "certify", "gandhi", "spectral", "survival", "selberg", "brun", "report")

REPORT_COLUMNS = [
    "source",
    "n",
    "p_n",
    "next_prime",
    "exact_sum",
    "exact_floor",
    "margin",
    "float_sum",
    "float_floor",
    "float_margin",
    "float_gap",
    "probability",
    "half_excess",
    "extracted_prime",
    "scaled_remainder",
    "subset_count",
    "mc_estimate",
    "estimate",
    "floored",
    "x",
    "z",
    "weights",
    "minimum",
    "survival_sign",
    "first_float_floor_break",
    "anomaly_count",
    "residual",
    "rel_error",
]

BENCHMARK_COLUMNS = ["operation", "n", "seconds"]


class UsageError(ValueError):
    """Bad flag combination or a parameter outside the configured resources."""


@dataclass
class RunConfig:
    """One harness invocation: exactly one command plus its parameters."""

    command: str
    n: int | None = None
    n_max: int | None = None
    x: int | None = None
    z: int | None = None
    x_upper: int | None = None  # scan bound of the twin-pair sum
    sieve_limit: int = core.DEFAULT_SIEVE_LIMIT
    samples: int = 1_000_000
    seed: int = 42
    alpha_override: float | None = None
    calib_lo: int = 10
    calib_hi: int = 1000
    fmt: str = "csv"
    out: str | None = None
    allow_large_gandhi: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, not {self.fmt!r}")
        for name in ("n", "n_max", "x", "z", "x_upper"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise UsageError(f"{name} must be positive")
        if self.sieve_limit < 2:
            raise UsageError("sieve limit must be at least 2")
        if self.samples < 1 or self.seed < 0:
            raise UsageError("samples must be positive and seed non-negative")
        if self.calib_lo < 3 or self.calib_hi <= self.calib_lo:
            raise UsageError("calibration window needs 3 <= lo < hi")


# -- row plumbing -----------------------------------------------------------

_TABLES: dict[int, core.PrimeTable] = {}


def _table(limit: int) -> core.PrimeTable:
    if limit not in _TABLES:
        _TABLES[limit] = core.sieve(limit)
    return _TABLES[limit]


def _blank_row() -> dict:
    return {c: "" for c in REPORT_COLUMNS}


def _fraction_str(value: Fraction) -> str:
    digits = max(value.numerator.bit_length(), value.denominator.bit_length()) // 3 + 10
    if digits > sys.get_int_max_str_digits():
        sys.set_int_max_str_digits(digits)
    return f"{value.numerator}/{value.denominator}"


def _csv_cell(value) -> str:
    if isinstance(value, Fraction):
        return _fraction_str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_cell(value):
    if isinstance(value, Fraction):
        return _fraction_str(value)
    if isinstance(value, str) and value == "":
        return None
    return value


def write_rows(rows: list[dict], fmt: str, stream, columns: list[str] | None = None) -> None:
    columns = columns or REPORT_COLUMNS
    if fmt == "csv":
        writer = csv.writer(stream)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(c, "")) for c in columns])
    else:
        payload = [{c: _json_cell(row.get(c, "")) for c in columns} for row in rows]
        json.dump(payload, stream, indent=1)
        stream.write("\n")


def _estimator_row(source: str, record: core.EstimatorRecord) -> dict:
    row = _blank_row()
    row.update(
        source=source,
        n=record.n,
        p_n=record.p_n,
        estimate=record.estimate,
        floored=record.floored,
        residual=record.residual,
        rel_error=record.rel_error,
    )
    return row


def _certificate_row(report: sieve_identity.CertificateReport, table: core.PrimeTable) -> dict:
    row = _blank_row()
    row.update(
        source="sieve_identity",
        n=report.n,
        p_n=table.nth(report.n),
        next_prime=report.next_prime,
        exact_sum=report.exact_sum,
        exact_floor=report.exact_floor,
        margin=report.margin,
        float_sum=report.float_sum,
        float_floor=report.float_floor,
        float_margin=report.float_margin,
        float_gap=report.float_gap,
    )
    return row


# -- command executors -------------------------------------------------------


def _require(config: RunConfig, *names: str) -> None:
    for name in names:
        if getattr(config, name) is None:
            raise UsageError(f"command {config.command!r} needs --{name.replace('_', '-')}")


def _check_scan_range(table: core.PrimeTable, n_max: int) -> None:
    """The certificate scan reaches 2 p_n; fail naming the limit actually needed."""
    if n_max > len(table.primes):
        approx = 2 * int(n_max * (math.log(n_max) + math.log(max(math.log(n_max), 2.0)))) + 16
        raise UsageError(
            f"n_max={n_max} is beyond the {len(table.primes)} tabulated primes; "
            f"needs roughly --sieve-limit {approx}"
        )
    required = 2 * table.nth(n_max)
    if required > table.limit:
        raise UsageError(
            f"n_max={n_max} scans up to {required}; needs --sieve-limit {required}"
        )


def _run_sieve_next(config: RunConfig, table: core.PrimeTable):
    if config.n is None and config.n_max is None:
        raise UsageError("command 'sieve-next' needs --n or --n-max")
    lo, hi = (config.n, config.n) if config.n_max is None else (1, config.n_max)
    _check_scan_range(table, hi)
    rows, violations = [], []
    for n in range(lo, hi + 1):
        found = sieve_identity.next_prime_via_filter(n, table)
        expected = table.nth(n + 1)
        if found != expected:
            violations.append(f"n={n}: filter found {found}, oracle has {expected}")
        row = _blank_row()
        row.update(source="sieve_identity", n=n, p_n=table.nth(n), next_prime=found)
        rows.append(row)
    return rows, violations


def _run_certify(config: RunConfig, table: core.PrimeTable):
    _require(config, "n_max")
    _check_scan_range(table, config.n_max)
    rows, violations = [], []
    for n in range(1, config.n_max + 1):
        report = sieve_identity.harmonic_certificate(n, table)
        violations.extend(report.violations())
        if report.next_prime != table.nth(n + 1):
            violations.append(
                f"n={n}: certificate survivor {report.next_prime}, oracle {table.nth(n + 1)}"
            )
        rows.append(_certificate_row(report, table))
    return rows, violations


def _run_gandhi(config: RunConfig, table: core.PrimeTable):
    if config.n is None and config.n_max is None:
        raise UsageError("command 'gandhi' needs --n or --n-max")
    lo, hi = (config.n, config.n) if config.n_max is None else (1, config.n_max)
    rows, violations = [], []
    for n in range(lo, hi + 1):
        evaluation = gandhi.evaluate(n, table, allow_large=config.allow_large_gandhi)
        violations.extend(evaluation.violations())
        expected = table.nth(n + 1)
        if evaluation.extracted_prime != expected:
            violations.append(
                f"n={n}: extracted {evaluation.extracted_prime}, oracle has {expected}"
            )
        row = _blank_row()
        row.update(
            source="gandhi",
            n=n,
            p_n=table.nth(n),
            next_prime=expected,
            probability=evaluation.probability,
            half_excess=evaluation.half_excess,
            extracted_prime=evaluation.extracted_prime,
            scaled_remainder=evaluation.scaled_remainder,
            subset_count=evaluation.subset_count,
            mc_estimate=gandhi.monte_carlo_survivor_fraction(n, config.samples, config.seed, table),
        )
        rows.append(row)
    return rows, violations


def _spectral_params(config: RunConfig) -> spectral.SpectralParams:
    return spectral.SpectralParams(calib_lo=config.calib_lo, calib_hi=config.calib_hi)


def _resolve_amplitude(config: RunConfig, table: core.PrimeTable) -> float:
    if config.alpha_override is not None:
        return config.alpha_override
    return spectral.calibrate_amplitude(_spectral_params(config), table)


def _run_spectral(config: RunConfig, table: core.PrimeTable):
    _require(config, "n_max")
    if config.n_max < 3:
        raise UsageError("spectral sweep needs --n-max >= 3")
    amplitude = _resolve_amplitude(config, table)
    params = spectral.SpectralParams(
        amplitude=amplitude, calib_lo=config.calib_lo, calib_hi=config.calib_hi
    )
    records = spectral.spectral_sweep(3, config.n_max, params, table)
    return [_estimator_row("spectral", r) for r in records], []


def _run_survival(config: RunConfig, table: core.PrimeTable):
    _require(config, "n_max")
    if config.n_max < 3:
        raise UsageError("survival sweep needs --n-max >= 3")
    params = survival.SurvivalParams()
    by_n = {}
    for record in survival.survival_sweep(3, config.n_max, params, table):
        by_n.setdefault(record.n, []).append(_estimator_row("survival", record))
    for record in survival.capacity_sweep(3, config.n_max, table):
        by_n.setdefault(record.n, []).append(_estimator_row("capacity", record))
    rows = [row for n in sorted(by_n) for row in by_n[n]]
    return rows, []


def _run_selberg(config: RunConfig, table: core.PrimeTable):
    _require(config, "x", "z")
    solution = survival.selberg_minimize(config.x, config.z)
    row = _blank_row()
    row.update(
        source="selberg",
        n=len(solution.divisors),
        x=solution.x,
        z=solution.z,
        weights=";".join(f"{d}:{w!r}" for d, w in zip(solution.divisors, solution.weights)),
        minimum=solution.minimum,
    )
    return [row], []


def _run_brun(config: RunConfig, table: core.PrimeTable):
    _require(config, "x_upper")
    if config.x_upper > table.limit:
        raise UsageError(f"--X {config.x_upper} needs --sieve-limit {config.x_upper}")
    value = survival.brun_partial(config.x_upper, table)
    row = _blank_row()
    row.update(source="brun", n=len(table.twin_pairs(config.x_upper)), x=config.x_upper, estimate=value)
    return [row], []


def precision_study(
    n_max: int, table: core.PrimeTable, amplitude: float, params: survival.SurvivalParams | None = None
) -> tuple[list[dict], dict]:
    """Per-n float-vs-exact study plus a summary block.

    Rows carry the exact margin (as an exact rational), its float shadow,
    the signed float gap, the float floor, the sign of the survival
    residual, and the spectral residual.  The summary reports the first n
    (if any) whose float floor broke, the anomaly count, and the largest
    absolute float gap; it is emitted even when nothing deviated.
    """
    reports = sieve_identity.precision_probe(n_max, table)
    spectral_params = spectral.SpectralParams(amplitude=amplitude)
    survival_params = params or survival.SurvivalParams()
    survival_records = (
        {r.n: r for r in survival.survival_sweep(3, n_max, survival_params, table)}
        if n_max >= 3
        else {}
    )
    spectral_records = (
        {r.n: r for r in spectral.spectral_sweep(3, n_max, spectral_params, table)}
        if n_max >= 3
        else {}
    )
    rows = []
    for report in reports:
        row = _blank_row()
        row.update(
            source="precision",
            n=report.n,
            p_n=table.nth(report.n),
            margin=report.margin,
            float_margin=report.float_margin,
            float_gap=report.float_gap,
            float_floor=report.float_floor,
        )
        survival_record = survival_records.get(report.n)
        if survival_record is not None:
            sign = (survival_record.residual > 0) - (survival_record.residual < 0)
            row.update(survival_sign=sign)
        spectral_record = spectral_records.get(report.n)
        if spectral_record is not None:
            row.update(residual=spectral_record.residual)
        rows.append(row)
    anomalies = sieve_identity.float_anomalies(reports)
    floor_breaks = [r.n for r in reports if r.float_floor != 1]
    summary = {
        "first_float_floor_break": floor_breaks[0] if floor_breaks else "",
        "anomaly_count": len(anomalies),
        "max_abs_float_gap": max(abs(r.float_gap) for r in reports),
    }
    return rows, summary


def _run_report(config: RunConfig, table: core.PrimeTable):
    _require(config, "n_max")
    _check_scan_range(table, config.n_max)
    amplitude = _resolve_amplitude(config, table)
    rows, summary = precision_study(config.n_max, table, amplitude)
    summary_row = _blank_row()
    summary_row.update(
        source="summary",
        first_float_floor_break=summary["first_float_floor_break"],
        anomaly_count=summary["anomaly_count"],
        float_gap=summary["max_abs_float_gap"],
    )
    return rows + [summary_row], []


def benchmark(n_max: int, table: core.PrimeTable) -> list[dict]:
    """Wall-clock timings: filter scans up to n_max, Gandhi steps up to 7.

    Measurement only; no scaling assertion is made anywhere in the suite.
    """
    if n_max > 500:
        raise UsageError("benchmark sweeps the filter scan only up to n_max = 500")
    _check_scan_range(table, n_max)
    rows = []
    for n in range(1, n_max + 1):
        start = time.perf_counter()
        sieve_identity.next_prime_via_filter(n, table)
        rows.append(
            {"operation": "next_prime_via_filter", "n": n, "seconds": time.perf_counter() - start}
        )
    for n in range(1, min(n_max, gandhi.FEASIBLE_N) + 1):
        start = time.perf_counter()
        gandhi.survivor_probability(n, table)
        rows.append(
            {"operation": "survivor_probability", "n": n, "seconds": time.perf_counter() - start}
        )
    return rows


_EXECUTORS = {
    "sieve-next": _run_sieve_next,
    "certify": _run_certify,
    "gandhi": _run_gandhi,
    "spectral": _run_spectral,
    "survival": _run_survival,
    "selberg": _run_selberg,
    "brun": _run_brun,
    "report": _run_report,
}


def run(config: RunConfig, stream=None) -> int:
    """Dispatch one configured command; returns the process exit code.

    Rows stream in ascending n; the report is written even when an exact
    invariant failed, but the exit code then flags the failure.
    """
    try:
        table = _table(config.sieve_limit)
        rows, violations = _EXECUTORS[config.command](config, table)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except core.ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except core.InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT

    if stream is not None:
        write_rows(rows, config.fmt, stream)
    elif config.out is None:
        write_rows(rows, config.fmt, sys.stdout)
    else:
        with open(config.out, "w", encoding="utf-8", newline="") as handle:
            write_rows(rows, config.fmt, handle)

    if violations:
        for violation in violations:
            print(f"invariant violation: {violation}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sieve-limit", type=int, default=core.DEFAULT_SIEVE_LIMIT)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default: standard output)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=1_000_000)

    parser = argparse.ArgumentParser(
        prog="primeforms",
        description="Exact certificates and phenomenological estimators for the n-th prime.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve-next", parents=[common], help="next prime via the coprimality filter")
    p.add_argument("--n", type=int)
    p.add_argument("--n-max", type=int)

    p = sub.add_parser("certify", parents=[common], help="exact harmonic-sum certificates")
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("gandhi", parents=[common], help="exact Gandhi-formula evaluation")
    p.add_argument("--n", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--allow-large-gandhi", action="store_true")

    p = sub.add_parser("spectral", parents=[common], help="drift + resonance estimates")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--alpha", type=float, default=None, help="override the calibrated amplitude")
    p.add_argument("--calib-lo", type=int, default=10)
    p.add_argument("--calib-hi", type=int, default=1000)

    p = sub.add_parser("survival", parents=[common], help="growth-product and capacity estimates")
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("selberg", parents=[common], help="minimize the sieve quadratic form")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--z", type=int, required=True)

    p = sub.add_parser("brun", parents=[common], help="twin-prime partial sums")
    p.add_argument("--X", type=int, required=True, dest="x_upper")

    p = sub.add_parser("report", parents=[common], help="float-vs-exact precision study")
    p.add_argument("--n-max", type=int, required=True)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        n_max=getattr(args, "n_max", None),
        x=getattr(args, "x", None),
        z=getattr(args, "z", None),
        x_upper=getattr(args, "x_upper", None),
        sieve_limit=args.sieve_limit,
        samples=args.samples,
        seed=args.seed,
        alpha_override=getattr(args, "alpha", None),
        calib_lo=getattr(args, "calib_lo", 10),
        calib_hi=getattr(args, "calib_hi", 1000),
        fmt=args.format,
        out=args.out,
        allow_large_gandhi=getattr(args, "allow_large_gandhi", False),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
