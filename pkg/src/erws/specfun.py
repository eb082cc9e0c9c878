"""Special functions and coefficient sequences.

Everything Gamma-shaped is computed in log space and exponentiated once;
Gamma(n) itself overflows double precision at n = 171, so the ratio
coefficients a_n = Gamma(n)Gamma(a+1)/Gamma(n+a) and friends are only ever
formed as exp of lgamma differences (exact telescoping products below
n = 512). Ratios stay finite out to n = 1e9; relative accuracy is ~1e-13
at n = 1e3, ~1e-9 at n = 1e6, and ~5e-6 at n = 1e9 where lgamma's absolute
error dominates.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import ConvergenceFailure, DomainError

_EPS = 2.0 ** -52
STIRLING_MAX = 30
# Absolute certification cap for the Pollard density (see ml_density).
DENSITY_CERT_ABS = 1e-10
# float64 summation floor for the series limit of v_n (see v_limit).
V_LIMIT_REL_FLOOR = 5e-13


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-14
    max_terms: int = 10 ** 6

    def __post_init__(self):
        if not (self.rel_tol > 0.0):
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_CONTROL = SeriesControl()


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def gamma_ratio(x: float, y: float) -> float:
    """Gamma(x)/Gamma(y) for positive arguments, overflow-safe."""
    return math.exp(log_gamma(x) - log_gamma(y))


_PRODUCT_N_MAX = 512


def rising_ratio(n: int, c: float) -> float:
    """Gamma(n+c)/Gamma(n) for integer n >= 1 and c > -1.

    Small n uses the exact telescoping product Gamma(1+c) * prod (j+c)/j,
    which keeps absolute error at ~n ulps even when the ratio is large;
    the lgamma route would lose ~|lgamma| * eps absolutely.
    """
    if n < 1:
        raise DomainError(f"rising_ratio requires n >= 1, got {n}")
    if c <= -1.0:
        raise DomainError(f"rising_ratio requires c > -1, got {c!r}")
    if n <= _PRODUCT_N_MAX:
        out = math.gamma(1.0 + c)
        for j in range(1, n):
            out *= (j + c) / j
        return out
    return math.exp(math.lgamma(n + c) - math.lgamma(n))


def coeff_a(n: int, a: float) -> float:
    """a_n = Gamma(n)Gamma(a+1)/Gamma(n+a), the position-martingale coefficient."""
    if n < 1:
        raise DomainError(f"coeff_a requires n >= 1, got {n}")
    if a <= -1.0:
        raise DomainError(f"coeff_a requires a > -1, got {a!r}")
    return math.gamma(a + 1.0) / rising_ratio(n, a)


def coeff_b(n: int, b: float) -> float:
    """b_n = Gamma(n)Gamma(b+1)/Gamma(n+b), the ones-martingale coefficient."""
    return coeff_a(n, b)


def coeff_bm(n: int, m: int, b: float) -> float:
    """b_n(m) = Gamma(n+mb)/(Gamma(n)Gamma(1+mb)); b_n(1)*b_n = 1."""
    if n < 1 or m < 1:
        raise DomainError(f"coeff_bm requires n, m >= 1, got n={n}, m={m}")
    if 1.0 + m * b <= 0.0 or n + m * b <= 0.0:
        raise DomainError(f"coeff_bm hits a Gamma pole at m*b = {m * b!r}")
    return rising_ratio(n, m * b) / math.gamma(1.0 + m * b)


def pochhammer(x: float, m: int) -> float:
    """Rising factorial x(x+1)...(x+m-1), with x^(0) = 1."""
    if m < 0:
        raise DomainError(f"pochhammer requires m >= 0, got {m}")
    out = 1.0
    for j in range(m):
        out *= x + j
    return out


@lru_cache(maxsize=1)
def _stirling_table() -> tuple:
    rows = [(1,)]
    for m in range(1, STIRLING_MAX + 1):
        prev = rows[m - 1]
        row = [0] * (m + 1)
        for k in range(1, m + 1):
            row[k] = (m - 1) * (prev[k] if k < m else 0) + prev[k - 1]
        rows.append(tuple(row))
    return tuple(rows)


def stirling1u(m: int, k: int) -> int:
    """Unsigned Stirling number of the first kind [m, k], exact integer."""
    if m < 0 or k < 0 or k > m:
        raise DomainError(f"stirling1u requires 0 <= k <= m, got m={m}, k={k}")
    if m > STIRLING_MAX:
        raise DomainError(f"stirling1u table capped at m = {STIRLING_MAX}, got {m}")
    return _stirling_table()[m][k]


def ml_moment(alpha: float, m: int) -> float:
    """m-th moment m!/Gamma(1+m*alpha) of the Mittag-Leffler(alpha) law."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"ml_moment requires alpha in [0, 1], got {alpha!r}")
    if m < 0:
        raise DomainError(f"ml_moment requires m >= 0, got {m}")
    return math.exp(log_gamma(m + 1.0) - log_gamma(1.0 + m * alpha))


def ml_mgf(alpha: float, t: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Mittag-Leffler function E_alpha(t) = sum t^n / Gamma(1+n*alpha).

    Defined for any alpha >= 0 (alpha=0 is the geometric case, needing
    |t| < 1). Truncation stops once the tail bound drops below
    rel_tol * |sum|; roundoff from cancellation (large negative t) is the
    caller's concern.
    """
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise DomainError(f"ml_mgf requires alpha >= 0, got {alpha!r}")
    if not math.isfinite(t):
        raise DomainError(f"ml_mgf requires finite t, got {t!r}")
    total = 1.0  # n = 0 term
    term = 1.0
    lg_prev = 0.0
    for n in range(1, ctl.max_terms + 1):
        lg_cur = math.lgamma(1.0 + n * alpha)
        ratio = t * math.exp(lg_prev - lg_cur)
        term *= ratio
        total += term
        lg_prev = lg_cur
        if not math.isfinite(term):
            raise ConvergenceFailure(
                f"ml_mgf(alpha={alpha}, t={t}): series overflows double precision")
        # lgamma convexity makes |ratio| decrease in n, so once |ratio| < 1
        # the remaining tail is geometrically bounded by it.
        rho = abs(ratio)
        if rho < 1.0:
            tail = abs(term) * rho / (1.0 - rho)
            if tail <= ctl.rel_tol * max(abs(total), 1e-300):
                return total
    raise ConvergenceFailure(
        f"ml_mgf(alpha={alpha}, t={t}) not converged within {ctl.max_terms} terms")


def ml_density(alpha: float, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Mittag-Leffler density at x via the classical power series.

    Valid for 0 < alpha < 1; returns 0 for x <= 0. The series alternates with
    a large hump before decaying, so the value is certified: estimated
    roundoff plus truncation tail must stay below
    max(rel_tol*|f|, 1e-10), else ConvergenceFailure (large x or alpha
    near 1 are numerically unreachable in double precision).
    """
    if not (math.isfinite(alpha) and 0.0 < alpha < 1.0):
        raise DomainError(f"ml_density requires alpha in (0, 1), got {alpha!r}")
    if not math.isfinite(x):
        raise DomainError(f"ml_density requires finite x, got {x!r}")
    if x <= 0.0:
        return 0.0

    lx = math.log(x)
    total = 0.0
    abs_total = 0.0
    prev_mag = math.inf
    tiny_run = 0
    mag = 0.0
    converged = False
    for n in range(1, ctl.max_terms + 1):
        lt = math.lgamma(1.0 + alpha * n) - math.lgamma(n + 1.0) + (n - 1) * lx
        if lt > 700.0:
            raise ConvergenceFailure(
                f"ml_density(alpha={alpha}, x={x}): series term overflows double")
        mag = math.exp(lt)
        term = mag * math.sin(alpha * n * math.pi)
        if n % 2 == 0:
            term = -term
        total += term
        abs_total += abs(term)
        if mag <= prev_mag and mag <= ctl.rel_tol * max(abs(total), 1e-300):
            tiny_run += 1
            if tiny_run >= 3 and n >= 6:
                converged = True
                break
        else:
            tiny_run = 0
        prev_mag = mag
    if not converged:
        raise ConvergenceFailure(
            f"ml_density(alpha={alpha}, x={x}) not converged within {ctl.max_terms} terms")

    scale = 1.0 / (math.pi * alpha)
    value = total * scale
    err_est = (8.0 * _EPS * abs_total + 2.0 * mag) * scale
    if err_est > max(ctl.rel_tol * abs(value), DENSITY_CERT_ABS):
        raise ConvergenceFailure(
            f"ml_density(alpha={alpha}, x={x}): cancellation leaves ~{err_est:.2e} "
            f"absolute error, beyond the certified domain")
    return value


def v_partial(n: int, a: float, b: float) -> float:
    """Partial sum sum_{k=1}^{n} a_k^2/(k b_k) of the variance series."""
    if n < 1:
        raise DomainError(f"v_partial requires n >= 1, got {n}")
    if a <= -1.0 or b <= -1.0:
        raise DomainError(f"v_partial requires a, b > -1, got a={a!r}, b={b!r}")
    return float(_kernels.v_partial_sums(a, b, np.array([n], dtype=np.int64))[0])


def v_partial_grid(ns, a: float, b: float) -> np.ndarray:
    """v_partial at several ascending horizons in one pass."""
    grid = np.asarray(sorted(int(n) for n in ns), dtype=np.int64)
    if len(grid) == 0 or grid[0] < 1:
        raise DomainError("v_partial_grid needs ascending horizons >= 1")
    return _kernels.v_partial_sums(a, b, grid)


def _tail_extrapolate(grid, sums, excess: float) -> float:
    # Model v_inf - v_N = N^-e (C0 + C1/N + C2/N^2 + ...): linear in
    # (v_inf, C0, ..., C_{k-2}) given k grid points.
    k = len(grid)
    A = np.zeros((k, k))
    A[:, 0] = 1.0
    g = np.asarray(grid, dtype=float)
    for i in range(1, k):
        A[:, i] = -np.power(g, -(excess + i - 1))
    return float(np.linalg.solve(A, np.asarray(sums))[0])


def v_limit(a: float, b: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Limit of v_n, i.e. the hypergeometric 4F3(1,1,1,b+1; 2,a+1,a+1; 1).

    Converges only when 2a > b (the bottom-minus-top parameter excess).
    Direct summation cannot reach rel_tol because the terms decay like
    k^-(1+2a-b); instead partial sums on a geometric grid are combined with
    a known-exponent tail extrapolation. The self-estimated error must fall
    below max(rel_tol, 5e-13) * |value| (float64 summation floor).
    """
    excess = 2.0 * a - b
    if excess <= 0.0:
        raise DomainError(
            f"v_limit requires the superdiffusive excess 2a-b > 0, got {excess!r}")
    n0 = 4096
    levels = 6
    while True:
        top = n0 * 2 ** (levels - 1)
        if top > ctl.max_terms:
            raise ConvergenceFailure(
                f"v_limit(a={a}, b={b}) cannot be certified within "
                f"max_terms={ctl.max_terms}")
        grid = [n0 * 2 ** j for j in range(levels)]
        sums = _kernels.v_partial_sums(a, b, np.asarray(grid, dtype=np.int64))
        est = _tail_extrapolate(grid, sums, excess)
        est_lo = _tail_extrapolate(grid[1:], sums[1:], excess)
        err = abs(est - est_lo)
        if err <= max(ctl.rel_tol, V_LIMIT_REL_FLOOR) * abs(est):
            return est
        n0 *= 4
