"""Degenerate-spectrum Gaussian ensemble: eigenvalue density, exact partition
function with one multiple eigenvalue, and Monte Carlo checks of the
underlying multiple integrals.

Monte Carlo draws come from numpy's counter-based Philox generator.  Samples
are split into fixed-size chunks, each chunk gets its own stream spawned from
the seed, and chunk statistics merge associatively, so an estimate depends
only on ``(seed, samples)`` and never on how the chunks are scheduled.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import factorial

import numpy as np
from gmpy2 import mpq

from .algebra import to_rational
from .moments import hankel_det, weight_moments

__all__ = [
    "MultiplicityPartition",
    "McEstimate",
    "jpdf_log",
    "exact_partition",
    "exact_dn",
    "mc_dn",
    "mc_partition",
]

CHUNK = 1 << 16
MIN_SAMPLES = 10_000


@dataclass(frozen=True)
class MultiplicityPartition:
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if not self.m or any(x < 1 for x in self.m):
            raise ValueError("multiplicities must be positive integers")

    @property
    def N(self) -> int:
        return sum(self.m)


def jpdf_log(mu, part: MultiplicityPartition) -> float:
    """Unnormalized log density of the distinct eigenvalues ``mu``:
    ``sum_{i<j} 2 m_i m_j log|mu_i - mu_j| - sum_i m_i mu_i^2``.

    Returns ``-inf`` when two eigenvalues coincide.
    """
    mu = [float(x) for x in mu]
    m = part.m
    if len(mu) != len(m):
        raise ValueError("need one eigenvalue per multiplicity")
    total = -sum(mi * x * x for mi, x in zip(m, mu))
    for i in range(len(mu)):
        for j in range(i + 1, len(mu)):
            gap = abs(mu[i] - mu[j])
            if gap == 0:
                return -math.inf
            total += 2 * m[i] * m[j] * math.log(gap)
    return total


def exact_dn(n: int, K: int, t) -> mpq:
    """``D̂_n(t)`` at a rational point."""
    D = hankel_det(weight_moments(K, max(2 * n - 2, 0)), n)
    return D(to_rational(t))


def exact_partition(n: int, K: int) -> mpq:
    """Rational r with ``Delta_{n+K} = pi^((n+1)/2) r / sqrt(K)``.

    Integrates the even polynomial D̂_n against ``exp(-K t^2)`` term by term.
    """
    if K < 1 or n < 0:
        raise ValueError("need K >= 1 and n >= 0")
    D = hankel_det(weight_moments(K, max(2 * n - 2, 0)), n)
    r = mpq(0)
    for k, c in enumerate(D.coeffs):
        if k % 2 or not c:
            continue
        j = k // 2
        r += c * mpq(factorial(2 * j), 4 ** j * factorial(j)) / mpq(K) ** j
    return r


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def z_score(self, exact) -> float:
        if self.std_error == 0:
            return 0.0 if float(exact) == self.mean else math.inf
        return (self.mean - float(exact)) / self.std_error


def _integrand(x: np.ndarray, t, K: int) -> np.ndarray:
    """prod_{i<j} (x_i - x_j)^2 * prod_l (x_l - t)^(2K) for rows of x."""
    n = x.shape[1]
    val = np.ones(x.shape[0])
    for i in range(n):
        for j in range(i + 1, n):
            val *= (x[:, i] - x[:, j]) ** 2
    tt = t if np.ndim(t) == 0 else t[:, None]
    val *= np.prod((x - tt) ** (2 * K), axis=1)
    return val


def _run_chunks(samples: int, seed: int, draw, workers: int):
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    def one(k):
        rng = np.random.Generator(np.random.Philox(streams[k]))
        v = draw(rng, sizes[k])
        return float(v.sum()), float((v * v).sum())

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    else:
        parts = [one(k) for k in range(len(sizes))]
    s = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)


def mc_dn(n: int, K: int, t, samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> McEstimate:
    """Importance-sampling estimate of ``D_n(t) / pi^(n/2)`` (comparable with D̂_n(t)).

    The x_i are independent draws from ``exp(-x^2)/sqrt(pi)``.
    """
    if n < 0 or K < 0:
        raise ValueError("need n >= 0 and K >= 0")
    t = float(to_rational(t)) if not isinstance(t, float) else t
    fact = factorial(n)

    def draw(rng, size):
        x = rng.normal(0.0, math.sqrt(0.5), size=(size, n))
        return _integrand(x, t, K) / fact

    mean, se = _run_chunks(samples, seed, draw, workers)
    return McEstimate(mean, se, samples, seed)


def mc_partition(n: int, K: int, samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> McEstimate:
    """Estimate of ``Delta_{n+K} sqrt(K) / pi^((n+1)/2)``; t is drawn from
    ``sqrt(K/pi) exp(-K t^2)`` alongside the x_i."""
    if n < 0 or K < 1:
        raise ValueError("need n >= 0 and K >= 1")
    fact = factorial(n)

    def draw(rng, size):
        t = rng.normal(0.0, math.sqrt(0.5 / K), size=size)
        x = rng.normal(0.0, math.sqrt(0.5), size=(size, n))
        return _integrand(x, t, K) / fact

    mean, se = _run_chunks(samples, seed, draw, workers)
    return McEstimate(mean, se, samples, seed)
