#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Hypergeometric Probabilities for the Bias Formula

The urn model behind the bias of the nearest-neighbour estimator draws the
h-1 ball members from the n-1 non-seed points without replacement, so the
number of same-label draws is hypergeometric. This module evaluates that pmf
without overflow for populations in the millions.

Small populations are evaluated exactly with integer binomials. Larger ones
use the saddle-point (deviance) form in log space, which keeps the relative
error near machine precision where a plain difference of log-gamma values
would lose several digits to cancellation.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple
import math

import numpy as np
from scipy.special import gammaln

from exceptions import DomainError


# Populations up to this size go through exact integer arithmetic
EXACT_POPULATION_LIMIT = 1000

# Above this, ln C(n, k) comes from log-gamma instead of an exact integer
EXACT_BINOMIAL_LIMIT = 1000

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LN_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class HypergeomParams:
    """Population, successes and draws of a hypergeometric law"""
    population: int
    successes: int
    draws: int

    def __post_init__(self):
        for name in ("population", "successes", "draws"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise DomainError(f"{name} must be an integer count, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.population < 0:
            raise DomainError(f"population must be >= 0, got {self.population}")
        if not 0 <= self.successes <= self.population:
            raise DomainError(
                f"successes must lie in [0, {self.population}], got {self.successes}")
        if not 0 <= self.draws <= self.population:
            raise DomainError(
                f"draws must lie in [0, {self.population}], got {self.draws}")

    @property
    def support(self) -> range:
        """Values of k with nonzero probability"""
        low = max(0, self.draws - (self.population - self.successes))
        high = min(self.draws, self.successes)
        return range(low, high + 1)


def log_binomial(n: int, k: int) -> float:
    """
    Natural logarithm of the binomial coefficient C(n, k)

    Args:
        n: Set size
        k: Subset size

    Returns:
        ln C(n, k)
    """
    if n < 0 or k < 0:
        raise DomainError(f"log_binomial needs non-negative arguments, got n={n}, k={k}")
    if k > n:
        raise DomainError(f"log_binomial needs k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 0.0
    if n <= EXACT_BINOMIAL_LIMIT:
        return math.log(math.comb(n, k))
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def _stirling_error(n: float) -> float:
    """ln(n!) minus its Stirling approximation ln(sqrt(2 pi n) (n/e)^n)"""
    if n <= 15.0:
        return float(gammaln(n + 1.0)) - (n + 0.5) * math.log(n) + n - _LN_SQRT_2PI
    nn = n * n
    s0, s1, s2, s3, s4 = 1.0 / 12, 1.0 / 360, 1.0 / 1260, 1.0 / 1680, 1.0 / 1188
    if n > 500:
        return (s0 - s1 / nn) / n
    if n > 80:
        return (s0 - (s1 - s2 / nn) / nn) / n
    if n > 35:
        return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n


def _deviance(x: float, mean: float) -> float:
    """x ln(x/mean) + mean - x, evaluated without cancellation near x == mean"""
    if abs(x - mean) < 0.1 * (x + mean):
        v = (x - mean) / (x + mean)
        s = (x - mean) * v
        ej = 2.0 * x * v
        v2 = v * v
        for j in range(1, 1000):
            ej *= v2
            s_next = s + ej / (2 * j + 1)
            if s_next == s:
                return s_next
            s = s_next
        return s
    return x * math.log(x / mean) + mean - x


def _log_binomial_density(x: int, size: int, p: float, q: float) -> float:
    """ln of C(size, x) p^x q^(size-x) in saddle-point form"""
    if x < 0 or x > size:
        return -math.inf
    if p == 0.0:
        return 0.0 if x == 0 else -math.inf
    if q == 0.0:
        return 0.0 if x == size else -math.inf
    if x == 0:
        if size == 0:
            return 0.0
        return -_deviance(size, size * q) - size * p if p < 0.1 else size * math.log(q)
    if x == size:
        return -_deviance(size, size * p) - size * q if q < 0.1 else size * math.log(p)
    lc = (_stirling_error(size) - _stirling_error(x) - _stirling_error(size - x)
          - _deviance(x, size * p) - _deviance(size - x, size * q))
    lf = _LN_2PI + math.log(x) + math.log1p(-x / size)
    return lc - 0.5 * lf


def _reduce(population: int, successes: int, draws: int, k: int) -> Tuple[int, int, int]:
    """
    Equivalent (successes, draws, k) with draws <= successes <= population / 2

    Counting the undrawn items, the failures, or exchanging the roles of
    successes and draws leaves the probability unchanged.
    """
    if 2 * draws > population:
        draws, k = population - draws, successes - k
    if 2 * successes > population:
        successes, k = population - successes, draws - k
    if draws > successes:
        successes, draws = draws, successes
    return successes, draws, k


def log_pmf_saddle(params: HypergeomParams, k: int) -> float:
    """
    Log-space hypergeometric pmf for any population size

    The law is first reduced so that the draw fraction p = draws / population
    is at most 1/2; with p near 1 the complementary densities lose accuracy.

    Args:
        params: Hypergeometric parameters
        k: Number of successes drawn

    Returns:
        ln P(K = k), -inf outside the support
    """
    population = params.population
    if k not in params.support:
        return -math.inf
    successes, draws, k = _reduce(population, params.successes, params.draws, k)
    failures = population - successes
    if draws == 0:
        return 0.0
    p = draws / population
    q = (population - draws) / population
    return (_log_binomial_density(k, successes, p, q)
            + _log_binomial_density(draws - k, failures, p, q)
            - _log_binomial_density(draws, population, p, q))


def _exact_pmf(params: HypergeomParams, k: int) -> float:
    numerator = math.comb(params.successes, k) * math.comb(
        params.population - params.successes, params.draws - k)
    # int / int is correctly rounded
    return numerator / math.comb(params.population, params.draws)


def hypergeom_pmf(params: HypergeomParams, k: int) -> float:
    """
    Probability of exactly k successes in params.draws draws without replacement

    Args:
        params: Hypergeometric parameters
        k: Number of successes drawn

    Returns:
        C(K, k) C(N-K, n-k) / C(N, n), exactly 0.0 outside the support
    """
    if not isinstance(params, HypergeomParams):
        raise DomainError(f"expected HypergeomParams, got {type(params).__name__}")
    k = int(k)
    if k not in params.support:
        return 0.0
    if params.population <= EXACT_POPULATION_LIMIT:
        return _exact_pmf(params, k)
    return math.exp(log_pmf_saddle(params, k))


def hypergeom_pmf_vector(params: HypergeomParams, ks: Sequence[int]) -> np.ndarray:
    """Vector of pmf values for several k"""
    return np.array([hypergeom_pmf(params, k) for k in ks], dtype=float)
