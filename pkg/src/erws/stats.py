"""Replicate-level sample statistics and CDF-distance goodness of fit."""

import math

import numpy as np

_SQRT2 = math.sqrt(2.0)
_erf = np.vectorize(math.erf, otypes=[np.float64])


def normal_cdf(x, sigma: float = 1.0):
    return 0.5 * (1.0 + _erf(np.asarray(x, dtype=np.float64) / (sigma * _SQRT2)))


def half_normal_cdf(x, sigma: float = 1.0):
    """CDF of |Z| for Z ~ N(0, sigma^2)."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x <= 0.0, 0.0, _erf(x / (sigma * _SQRT2)))


def moment_with_se(sample: np.ndarray, m: int) -> tuple[float, float]:
    """Sample mean of X^m with its standard error."""
    y = np.asarray(sample, dtype=np.float64) ** m
    n = y.size
    return float(y.mean()), float(y.std(ddof=1) / math.sqrt(n))


def variance_with_se(sample: np.ndarray) -> tuple[float, float]:
    """Sample variance and a delta-method standard error sqrt((m4-v^2)/n)."""
    x = np.asarray(sample, dtype=np.float64)
    n = x.size
    d = x - x.mean()
    v = float(np.dot(d, d) / (n - 1))
    m4 = float(np.mean(d ** 4))
    return v, math.sqrt(max(m4 - v * v, 0.0) / n)


def skewness(sample: np.ndarray) -> float:
    d = np.asarray(sample, dtype=np.float64)
    d = d - d.mean()
    m2 = np.mean(d ** 2)
    return float(np.mean(d ** 3) / m2 ** 1.5)


def excess_kurtosis(sample: np.ndarray) -> float:
    d = np.asarray(sample, dtype=np.float64)
    d = d - d.mean()
    m2 = np.mean(d ** 2)
    return float(np.mean(d ** 4) / (m2 * m2) - 3.0)


def cdf_distance(sample: np.ndarray, cdf) -> float:
    """sup_x |ECDF(x) - F(x)| evaluated at the sample points (both sides)."""
    xs = np.sort(np.asarray(sample, dtype=np.float64))
    n = xs.size
    F = np.asarray(cdf(xs), dtype=np.float64)
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(max(np.max(i / n - F), np.max(F - (i - 1.0) / n)))
