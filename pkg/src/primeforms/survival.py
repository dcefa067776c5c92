"""Survival-dynamics toolkit: Mertens products, sieve entropy, the capacity
identity with Selberg-optimal weights, and Brun partial sums.

The common thread is the survival rate of integers under sieving by the
first n primes.  Mertens' third theorem pins its asymptotic scale at
e^(-gamma)/ln p_n; the entropy and growth-product estimator reinterpret the
same depletion as accumulated information cost; the Selberg quadratic form
replaces the binary Möbius filter with real weights of minimal "resistance";
and the capacity sum V(z) turns those weights into a density estimate.
Estimator accuracy is never asserted, only measured against the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import EstimatorRecord, InvariantViolation, PrimeTable, adaptive_simpson

# Euler-Mascheroni constant, 50 digits (rounds to the nearest float64).
EULER_GAMMA = 0.57721566490153286060651209008240243104215933593992


@dataclass
class SurvivalParams:
    """Fixed constants of the survival model."""

    gamma: float = EULER_GAMMA
    entropy_tolerance: float = 1e-9

    def __post_init__(self):
        if not 0.5614 < math.exp(-self.gamma) < 0.5615:
            raise ValueError("gamma is inconsistent with the Mertens density constant")
        if self.entropy_tolerance <= 0:
            raise ValueError("entropy tolerance must be positive")


# -- Mertens products ------------------------------------------------------


def mertens_product(n: int, table: PrimeTable) -> tuple[float, float]:
    """Sieve survival product over the first n primes, plus its Mertens ratio.

    Returns (product, ratio) where product = prod(1 - 1/p_k, k <= n) by
    sequential multiplication and ratio = product * ln(p_n) / e^(-gamma);
    Mertens' third theorem drives the ratio to 1.
    """
    p_n = table.nth(n)
    product = 1.0
    for p in table.primes[:n]:
        product *= 1.0 - 1.0 / p
    return product, product * math.log(p_n) / math.exp(-EULER_GAMMA)


def mertens_sweep(n_max: int, table: PrimeTable) -> list[tuple[int, float, float]]:
    """(n, product, ratio) for n = 1..n_max with a single running product."""
    table.nth(n_max)
    out = []
    product = 1.0
    scale = math.exp(-EULER_GAMMA)
    for i, p in enumerate(table.primes[:n_max], start=1):
        product *= 1.0 - 1.0 / p
        out.append((i, product, product * math.log(p) / scale))
    return out


# -- entropy and surprisal -------------------------------------------------


def surprisal(x: float) -> float:
    """Information content of primality at x: log2(ln x)."""
    if x <= 1:
        raise ValueError("surprisal needs x > 1")
    return math.log2(math.log(x))


def entropy_integrand(x: float) -> float:
    """ln(ln x)/ln x, the density put under the quadrature form of the entropy."""
    return math.log(math.log(x)) / math.log(x)


def entropy(n: int, params: SurvivalParams | None = None) -> tuple[float, float]:
    """Accumulated sieve entropy up to n: discrete sum and quadrature form.

    The k-th term scores the heuristic density 1/ln k; the integral form is
    the adaptive quadrature of ln(ln x)/ln x over [2, n].  Both are returned
    so callers can report their gap.
    """
    if n < 3:
        raise ValueError("entropy needs n >= 3")
    params = params or SurvivalParams()
    terms = []
    for k in range(2, n + 1):
        density = 1.0 / math.log(k)
        terms.append(-density * math.log(density))
    sum_form = math.fsum(terms)
    integral_form = adaptive_simpson(entropy_integrand, 2.0, float(n), params.entropy_tolerance)
    return sum_form, integral_form


# -- growth-product estimator ------------------------------------------------


def _growth_term(k: int) -> float:
    return 1.0 + 1.0 / (k * math.log(k) - math.log(math.log(k)))


def survival_estimate(n: int, params: SurvivalParams, table: PrimeTable) -> EstimatorRecord:
    """Growth-product estimate (n ln n) * prod(1 + 1/(k ln k - ln ln k)) * e^(-gamma).

    Evaluated exactly as written, flooring at the end.  The residual against
    the oracle is recorded, never asserted small: the pre-asymptotic drift
    is one of the quantities this package exists to measure.
    """
    if n < 3:
        raise ValueError("survival estimate needs n >= 3")
    product = 1.0
    for k in range(2, n + 1):
        product *= _growth_term(k)
    estimate = n * math.log(n) * product * math.exp(-params.gamma)
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


def survival_sweep(n_lo: int, n_hi: int, params: SurvivalParams, table: PrimeTable) -> list[EstimatorRecord]:
    """Estimates for n in [n_lo, n_hi] with a single running product."""
    if n_lo < 3:
        raise ValueError("sweep needs n_lo >= 3")
    scale = math.exp(-params.gamma)
    product = 1.0
    for k in range(2, n_lo):
        product *= _growth_term(k)
    out = []
    for n in range(n_lo, n_hi + 1):
        product *= _growth_term(n)
        estimate = n * math.log(n) * product * scale
        p_n = table.nth(n)
        residual = p_n - estimate
        out.append(
            EstimatorRecord(
                n=n,
                p_n=p_n,
                estimate=estimate,
                floored=math.floor(estimate),
                residual=residual,
                rel_error=residual / p_n,
            )
        )
    return out


# -- Selberg quadratic form --------------------------------------------------


@dataclass
class SelbergSolution:
    """Minimizer of the sieve quadratic form sum_{m<=x} (sum_{d|m, d<z} w_d)^2."""

    x: int
    z: int
    divisors: list[int]  # squarefree support, divisors[0] == 1
    weights: list[float]  # optimal w_d; weights[0] == 1 exactly (the constraint)
    gram: np.ndarray = field(repr=False)  # gram[i][j] = floor(x / lcm(d_i, d_j))
    minimum: float


def _is_squarefree(d: int) -> bool:
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return False
        p += 1
    return True


def _moebius_small(d: int) -> int:
    if d == 1:
        return 1
    parity = 0
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            parity ^= 1
        p += 1
    if d > 1:
        parity ^= 1
    return -1 if parity else 1


def squarefree_support(z: int) -> list[int]:
    """Squarefree d < z, ascending: the support of the sieve weights."""
    return [d for d in range(1, z) if _is_squarefree(d)]


def quadratic_form_value(x: int, divisors: list[int], weights) -> float:
    """Direct evaluation of the quadratic form over m <= x (brute force)."""
    paired = list(zip(divisors, weights))
    squares = []
    for m in range(1, x + 1):
        inner = 0.0
        for d, w in paired:
            if m % d == 0:
                inner += w
        squares.append(inner * inner)
    return math.fsum(squares)


def moebius_truncation_value(x: int, z: int) -> float:
    """Value of the quadratic form under truncated Möbius weights w_d = mu(d)."""
    divisors = squarefree_support(z)
    return quadratic_form_value(x, divisors, [float(_moebius_small(d)) for d in divisors])


def selberg_minimize(x: int, z: int) -> SelbergSolution:
    """Minimize the sieve quadratic form subject to w_1 = 1.

    Builds the Gram matrix G[d, e] = floor(x / lcm(d, e)) over squarefree
    d, e < z, eliminates the constrained coordinate, and solves the
    remaining symmetric positive-definite system.  The reported minimum is
    verified against a direct brute-force re-evaluation over m <= x.

    Non-squarefree d are excluded: classical sieve weights are supported on
    squarefree moduli, and mu^2(d) = 0 removes them from the capacity sum.
    """
    if not 2 <= z <= x:
        raise ValueError("need 2 <= z <= x")
    divisors = squarefree_support(z)
    if len(divisors) > 64:
        raise ValueError(f"{len(divisors)} weights exceed the 64-weight small-instance solver")
    gram = np.array([[x // math.lcm(d, e) for e in divisors] for d in divisors], dtype=float)
    if len(divisors) == 1:
        weights = [1.0]
    else:
        body = gram[1:, 1:]
        rhs = -gram[1:, 0]
        try:
            tail = np.linalg.solve(body, rhs)
        except np.linalg.LinAlgError as exc:
            raise ValueError(
                f"singular Gram system for x={x}, z={z} "
                f"(condition estimate {np.linalg.cond(body):.3e})"
            ) from exc
        weights = [1.0] + [float(w) for w in tail]
    lam = np.asarray(weights)
    minimum = float(lam @ gram @ lam)
    brute = quadratic_form_value(x, divisors, weights)
    if abs(brute - minimum) > 1e-9 * max(1.0, abs(brute)):
        raise InvariantViolation(
            f"quadratic form mismatch for x={x}, z={z}: gram {minimum} vs direct {brute}"
        )
    return SelbergSolution(x=x, z=z, divisors=divisors, weights=weights, gram=gram, minimum=minimum)


# -- sieve capacity ----------------------------------------------------------


def capacity(z: int, table: PrimeTable) -> tuple[float, float]:
    """Cumulative sieve capacity V(z) = sum_{d<z} mu^2(d)/phi(d) and its reciprocal.

    The structural weight is fixed to the Euler totient, the classical
    choice for the prime sieve, so reported values are V_phi.
    """
    if z < 2:
        raise ValueError("need z >= 2 so the d = 1 term is present")
    v = math.fsum(1.0 / table.totient(d) for d in range(1, z) if table.moebius(d) != 0)
    return v, 1.0 / v


def capacity_estimate(n: int, table: PrimeTable, *, use_fixed_point: bool = False) -> EstimatorRecord:
    """Capacity-identity estimate n * V(z) at sieve level z ~ sqrt(p_n).

    The identity is self-referential (z depends on the p_n it estimates), so
    by default the oracle p_n feeds z and the module measures the identity's
    residual.  The fixed-point variant instead bootstraps z from sqrt(n ln n)
    and iterates twice.  z is clamped to >= 2; the sub-leading remainder is
    carried as zero and absorbed into the residual.
    """
    if n < 2:
        raise ValueError("capacity estimate needs n >= 2")
    p_n = table.nth(n)
    if use_fixed_point:
        z = max(2, math.isqrt(int(n * math.log(n))))
        for _ in range(2):
            v, _ = capacity(z, table)
            z = max(2, math.isqrt(int(n * v)))
    else:
        z = max(2, math.isqrt(p_n))
    v, _ = capacity(z, table)
    estimate = n * v
    residual = p_n - estimate
    return EstimatorRecord(
        n=n,
        p_n=p_n,
        estimate=estimate,
        floored=math.floor(estimate),
        residual=residual,
        rel_error=residual / p_n,
    )


def capacity_sweep(n_lo: int, n_hi: int, table: PrimeTable) -> list[EstimatorRecord]:
    """Oracle-fed capacity estimates for n in [n_lo, n_hi], advancing V(z) incrementally."""
    if n_lo < 2:
        raise ValueError("sweep needs n_lo >= 2")
    v = 1.0  # V(2): the d = 1 term
    z = 2
    out = []
    for n in range(n_lo, n_hi + 1):
        p_n = table.nth(n)
        target = max(2, math.isqrt(p_n))
        while z < target:
            if table.moebius(z) != 0:
                v += 1.0 / table.totient(z)
            z += 1
        estimate = n * v
        residual = p_n - estimate
        out.append(
            EstimatorRecord(
                n=n,
                p_n=p_n,
                estimate=estimate,
                floored=math.floor(estimate),
                residual=residual,
                rel_error=residual / p_n,
            )
        )
    return out


# -- Brun partial sums --------------------------------------------------------


def brun_partial(x_max: int, table: PrimeTable) -> float:
    """Partial Brun sum: 1/p + 1/(p+2) over twin pairs with p + 2 <= x_max."""
    if x_max < 1:
        raise ValueError("scan bound must be positive")
    return math.fsum(1.0 / p + 1.0 / q for p, q in table.twin_pairs(x_max))
