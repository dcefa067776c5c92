"""Discrete sieving identity for the next prime.

A Möbius-derived coprimality filter keeps exactly the integers sharing no
prime factor with the n-th primorial; on [1, 2 p_n] (Bertrand's range) the
smallest survivor above 1 is p_{n+1}, and the harmonic sum over survivors
has floor exactly 1.  The sum is evaluated in exact rationals; a 64-bit
float shadow of the same sum feeds the precision probes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import InvariantViolation, PrimeTable

MACHINE_EPSILON = 2.22e-16  # 64-bit epsilon, as used by the float probes
FLOAT_GAP_THRESHOLD = 1e3 * MACHINE_EPSILON


@dataclass
class CertificateReport:
    """Exact harmonic-sum certificate for one sieve step, with its float shadow."""

    n: int
    next_prime: int  # smallest filter survivor above 1
    exact_sum: Fraction  # sum of 1/m over survivors in [1, 2 p_n]
    exact_floor: int
    margin: Fraction  # exact_sum - 1
    float_sum: float  # naive 64-bit accumulation, ascending m
    float_floor: int

    @property
    def float_margin(self) -> float:
        return self.float_sum - 1.0

    @property
    def float_gap(self) -> float:
        """Signed float-vs-exact error of the harmonic sum."""
        return self.float_sum - float(self.exact_sum)

    @property
    def float_anomalous(self) -> bool:
        """True when the float shadow broke the floor or drifted past 1e3 epsilon."""
        return self.float_floor != 1 or abs(self.float_gap) > FLOAT_GAP_THRESHOLD

    def violations(self) -> list[str]:
        """Exact-certificate invariant check; an empty list means all hold."""
        out = []
        if self.exact_floor != 1:
            out.append(f"n={self.n}: exact floor is {self.exact_floor}, expected 1")
        if self.margin < Fraction(1, self.next_prime):
            out.append(f"n={self.n}: margin fell below 1/{self.next_prime}")
        tail = self.margin - Fraction(1, self.next_prime)
        if float(tail) >= math.log(2.0) + 1e-12:
            out.append(f"n={self.n}: harmonic tail {float(tail)} reached ln 2")
        return out


def coprime_indicator(m: int, n: int, table: PrimeTable) -> int:
    """Arithmetical filter: 1 iff m shares no prime factor with the n-th primorial.

    Evaluated along both routes the definition provides, the Möbius sum over
    the divisors of gcd(m, P_n) and the direct gcd test, which must agree on
    every call.
    """
    if m < 1:
        raise ValueError("filter argument must be a positive integer")
    g = math.gcd(m, table.primorial(n))
    via_gcd = 1 if g == 1 else 0
    divisors = [1]
    if g > 1:
        # g divides the squarefree primorial, so its divisors are exactly the
        # subset products of its distinct primes.
        for p in table.distinct_prime_factors(g):
            divisors += [d * p for d in divisors]
    mu = table.moebius_values(g)
    via_moebius = sum(mu[d] for d in divisors)
    if via_moebius != via_gcd:
        raise InvariantViolation(
            f"filter mismatch at m={m}, n={n}: Möbius sum {via_moebius}, gcd test {via_gcd}"
        )
    return via_gcd


def next_prime_via_filter(n: int, table: PrimeTable) -> int:
    """Smallest m > 1 passing the filter; Bertrand's postulate bounds the scan."""
    bound = 2 * table.nth(n)
    if bound > table.limit:
        raise ValueError(f"scan range [2, {bound}] is beyond sieve limit {table.limit}")
    for m in range(2, bound + 1):
        if coprime_indicator(m, n, table) == 1:
            return m
    raise InvariantViolation(
        f"no filter survivor in [2, {bound}] for n={n}; the scan range guarantees one"
    )


def harmonic_certificate(n: int, table: PrimeTable) -> CertificateReport:
    """Exact rational harmonic sum over the filter survivors in [1, 2 p_n].

    Only survivors contribute (the filter vanishes elsewhere), so the sum
    accumulates 1/m survivor-by-survivor in exact rationals.  The float
    shadow re-accumulates the same terms in 64-bit arithmetic ascending in
    m, matching the naive implementation the precision study critiques.
    """
    bound = 2 * table.nth(n)
    if bound > table.limit:
        raise ValueError(f"scan range [1, {bound}] is beyond sieve limit {table.limit}")
    survivors = table.primorial_coprime(n, bound)
    if len(survivors) < 2:
        raise InvariantViolation(f"no filter survivor above 1 in [1, {bound}] for n={n}")
    exact = Fraction(0)
    shadow = 0.0
    for m in survivors:
        exact += Fraction(1, m)
        shadow += 1.0 / m
    return CertificateReport(
        n=n,
        next_prime=survivors[1],
        exact_sum=exact,
        exact_floor=exact.numerator // exact.denominator,
        margin=exact - 1,
        float_sum=shadow,
        float_floor=math.floor(shadow),
    )


def precision_probe(n_max: int, table: PrimeTable) -> list[CertificateReport]:
    """Certificates for n = 1..n_max; `float_anomalous` marks floor or gap failures."""
    if n_max < 1:
        raise ValueError("probe needs n_max >= 1")
    return [harmonic_certificate(n, table) for n in range(1, n_max + 1)]


def float_anomalies(reports: list[CertificateReport]) -> list[int]:
    """The n whose float shadow broke the floor or drifted past the gap threshold."""
    return [r.n for r in reports if r.float_anomalous]
