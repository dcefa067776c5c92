"""Exact arithmetic substrate: the prime-sieve oracle and arithmetic functions.

Everything downstream trusts this module.  The sieve table is the ground
truth for every exact claim in the package, and certificate-bearing
arithmetic stays in `fractions.Fraction` / Python ints so no float ever
touches a certified value.  Floats are confined to the estimator modules
and to the explicit float-precision probes.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SIEVE_LIMIT = 2_000_000


class InvariantViolation(RuntimeError):
    """An exact-module invariant failed: an oracle or filter bug, not user error."""


class ResourceLimitError(RuntimeError):
    """A computation was refused because its cost grows past the configured bound."""


@dataclass
class EstimatorRecord:
    """One estimator evaluation against the oracle prime."""

    n: int
    p_n: int
    estimate: float
    floored: int
    residual: float  # p_n - estimate
    rel_error: float  # residual / p_n


@dataclass(eq=False)
class PrimeTable:
    """Sieve-of-Eratosthenes oracle for the primes up to `limit`.

    `primes` is strictly increasing and `index` maps p_n -> n (1-based,
    p_1 = 2).  A smallest-prime-factor array built during sieving makes
    factor extraction, and hence the Möbius / von Mangoldt / totient
    lookups, O(log m) instead of per-call trial division.

    The table is immutable after construction; the private attributes only
    memoize pure derived values, so one table can safely back every module.
    """

    limit: int
    primes: list[int]
    index: dict[int, int]
    _spf: np.ndarray = field(repr=False)
    _primorials: list[int] = field(default_factory=lambda: [1], repr=False)
    _mu_values: list[int] = field(default_factory=list, repr=False)
    _mangoldt: tuple | None = field(default=None, repr=False)

    # -- ordinal / counting lookups -------------------------------------

    def nth(self, n: int) -> int:
        """The n-th prime (1-based)."""
        if n < 1:
            raise ValueError("prime ordinals are 1-based")
        if n > len(self.primes):
            raise ValueError(
                f"p_{n} is beyond sieve limit {self.limit} "
                f"(only {len(self.primes)} primes tabulated)"
            )
        return self.primes[n - 1]

    def pi(self, x: int) -> int:
        """Prime-counting function: number of primes <= x."""
        if x > self.limit:
            raise ValueError(f"pi({x}) is beyond sieve limit {self.limit}")
        return bisect_right(self.primes, x)

    def next_prime(self, x: int) -> int:
        """Smallest tabulated prime strictly greater than x."""
        i = bisect_right(self.primes, x)
        if i == len(self.primes):
            raise ValueError(f"no prime above {x} within sieve limit {self.limit}")
        return self.primes[i]

    def is_prime(self, m: int) -> bool:
        if m > self.limit:
            raise ValueError(f"{m} is beyond sieve limit {self.limit}")
        return m >= 2 and int(self._spf[m]) == m

    def twin_pairs(self, x_max: int) -> list[tuple[int, int]]:
        """Twin pairs (p, p+2), both prime, with p + 2 <= x_max."""
        if x_max > self.limit:
            raise ValueError(f"twin scan bound {x_max} is beyond sieve limit {self.limit}")
        out = []
        for p, q in zip(self.primes, self.primes[1:]):
            if q > x_max:
                break
            if q - p == 2:
                out.append((p, q))
        return out

    # -- factorization --------------------------------------------------

    def smallest_prime_factor(self, m: int) -> int:
        if m < 2:
            raise ValueError("smallest prime factor needs m >= 2")
        if m > self.limit:
            raise ValueError(f"{m} is beyond sieve limit {self.limit}")
        return int(self._spf[m])

    def factorize(self, m: int) -> list[tuple[int, int]]:
        """Prime factorization [(p, exponent), ...] with p ascending.

        Uses the SPF table for m <= limit; above that, trial division by
        tabulated primes (valid while sqrt(m) <= limit).
        """
        if m < 1:
            raise ValueError("factorization needs a positive integer")
        out: list[tuple[int, int]] = []
        if m <= self.limit:
            spf = self._spf
            while m > 1:
                p = int(spf[m])
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out.append((p, e))
            return out
        if math.isqrt(m) > self.limit:
            raise ValueError(f"{m} is beyond factorization range of sieve limit {self.limit}")
        for p in self.primes:
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out.append((p, e))
        if m > 1:
            out.append((m, 1))  # the remaining cofactor is prime
        return out

    def distinct_prime_factors(self, m: int) -> list[int]:
        return [p for p, _ in self.factorize(m)]

    # -- arithmetic functions -------------------------------------------

    def moebius(self, m: int) -> int:
        """Möbius function: 0 on squared factors, else (-1)^(number of prime factors)."""
        if m < 1:
            raise ValueError("Möbius function is defined on positive integers")
        if m == 1:
            return 1
        parity = 0
        for _, e in self.factorize(m):
            if e > 1:
                return 0
            parity ^= 1
        return -1 if parity else 1

    def von_mangoldt(self, k: int) -> float:
        """Von Mangoldt weight: ln p if k is a power of the prime p, else 0."""
        if k < 1:
            raise ValueError("von Mangoldt weight is defined on positive integers")
        if k == 1:
            return 0.0
        factors = self.factorize(k)
        if len(factors) == 1:
            return math.log(factors[0][0])
        return 0.0

    def totient(self, d: int) -> int:
        """Euler totient phi(d)."""
        if d < 1:
            raise ValueError("totient is defined on positive integers")
        result = 1
        for p, e in self.factorize(d):
            result *= (p - 1) * p ** (e - 1)
        return result

    def primorial(self, n: int) -> int:
        """Product of the first n primes, exact; prefix products are memoized."""
        self.nth(n)  # range check
        cache = self._primorials
        while len(cache) <= n:
            cache.append(cache[-1] * self.primes[len(cache) - 1])
        return cache[n]

    # -- bulk lookups for hot loops ---------------------------------------

    def moebius_values(self, upto: int) -> list[int]:
        """List `mu` with mu[m] = moebius(m) for 1 <= m <= upto (mu[0] unused)."""
        if upto > self.limit:
            raise ValueError(f"{upto} is beyond sieve limit {self.limit}")
        cache = self._mu_values
        if len(cache) <= upto:
            bound = min(self.limit, max(upto, 2 * len(cache), 1024))
            values = [0, 1]
            for m in range(2, bound + 1):
                values.append(self.moebius(m))
            self._mu_values = values
            cache = values
        return cache

    def primorial_coprime(self, n: int, bound: int) -> list[int]:
        """Integers in [1, bound] coprime to the n-th primorial.

        Equivalent to gcd(m, P_n) = 1: m = 1 or the smallest prime factor
        of m exceeds p_n.  Vectorized over the SPF table.
        """
        p_n = self.nth(n)
        if bound > self.limit:
            raise ValueError(f"scan bound {bound} is beyond sieve limit {self.limit}")
        survivors = np.flatnonzero(self._spf[1 : bound + 1] > p_n) + 1
        return [1] + survivors.tolist()

    def mangoldt_points(self, upto: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Prime powers k <= upto with their logs and von Mangoldt weights.

        Returns ascending arrays (k, ln k, weight); points with zero weight
        are omitted since they cannot contribute to any weighted sum.
        """
        if upto > self.limit:
            raise ValueError(f"{upto} is beyond sieve limit {self.limit}")
        if self._mangoldt is None or self._mangoldt[0] < upto:
            bound = min(self.limit, max(upto, 1024))
            points = []
            for p in self.primes:
                if p > bound:
                    break
                weight = math.log(p)
                q = p
                while q <= bound:
                    points.append((q, weight))
                    q *= p
            points.sort()
            ks = np.array([k for k, _ in points], dtype=np.int64)
            self._mangoldt = (bound, ks, np.log(ks), np.array([w for _, w in points]))
        _, ks, log_ks, weights = self._mangoldt
        cut = int(np.searchsorted(ks, upto, side="right"))
        return ks[:cut], log_ks[:cut], weights[:cut]


def sieve(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes up to `limit` inclusive, with an SPF table."""
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    composite = bytearray(limit + 1)
    for p in range(2, math.isqrt(limit) + 1):
        if not composite[p]:
            start = p * p
            composite[start::p] = b"\x01" * len(range(start, limit + 1, p))
    primes = [m for m in range(2, limit + 1) if not composite[m]]
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in primes:
        lane = spf[p::p]
        lane[lane == 0] = p
    index = {p: i for i, p in enumerate(primes, start=1)}
    return PrimeTable(limit=limit, primes=primes, index=index, _spf=spf)


def adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    """Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol."""

    def node(lo, f_lo, f_mid, f_hi, hi):
        return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)

    def split(lo, hi, f_lo, f_mid, f_hi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        f_lm = f(0.5 * (lo + mid))
        f_rm = f(0.5 * (mid + hi))
        left = node(lo, f_lo, f_lm, f_mid, mid)
        right = node(mid, f_mid, f_rm, f_hi, hi)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return split(lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1) + split(
            mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1
        )

    a, b = float(a), float(b)
    f_a, f_b = f(a), f(b)
    mid = 0.5 * (a + b)
    f_mid = f(mid)
    return split(a, b, f_a, f_mid, f_b, node(a, f_a, f_mid, f_b, b), tol, 60)


def log_integral(x: float) -> float:
    """Offset logarithmic integral: the integral of dt/ln t from 2 to x.

    The integration range excludes the t = 1 singularity, so plain adaptive
    Simpson at absolute tolerance 1e-10 suffices.  Comparison baseline only;
    nothing exact is certified through this value.
    """
    if x < 2:
        raise ValueError("log_integral is defined for x >= 2")
    if x == 2:
        return 0.0
    return adaptive_simpson(lambda t: 1.0 / math.log(t), 2.0, float(x), 1e-10)
