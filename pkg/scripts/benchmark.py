#!/usr/bin/env python3
"""Wall-clock timing study: filter scans and Gandhi inclusion-exclusion steps.

Writes one CSV row per (operation, n).  Data only: the suite asserts
nothing about asymptotics, and neither does this script.

Usage:
    python scripts/benchmark.py --n-max 200 --out timings.csv
"""

import argparse
import sys

from primeforms.core import DEFAULT_SIEVE_LIMIT, sieve
from primeforms.harness import BENCHMARK_COLUMNS, benchmark, write_rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=100)
    parser.add_argument("--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT)
    parser.add_argument("--out", default=None, help="CSV path (default: standard output)")
    args = parser.parse_args(argv)

    table = sieve(args.sieve_limit)
    rows = benchmark(args.n_max, table)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            write_rows(rows, "csv", handle, columns=BENCHMARK_COLUMNS)
    else:
        write_rows(rows, "csv", sys.stdout, columns=BENCHMARK_COLUMNS)
    return 0


if __name__ == "__main__":
    sys.exit(main())
