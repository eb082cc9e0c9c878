"""Statistical verification of the limit theorems at desk scale.

Tolerance policy (two tiers, stated in every report):
  * tight checks compare sample moments to exact finite-n values and carry
    pure Monte Carlo tolerances (4 standard errors): bias-free by
    construction;
  * loose checks compare to asymptotic targets and add a drift budget on top
    of the 4 SE, because no finite-n error rates are available for the limit
    theorems. Defaults: 5% relative for moments, 0.02 for CDF distances at
    n >= 1e6 (0.06 below that), doubled in the critical regime where the
    convergence rate is logarithmic.

Shape checks (skewness/kurtosis/CDF) are reported but not gated in
situations where the log-rate drift makes them meaningless at desk scale;
each such row is marked gated=false in the report.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .ensemble import DEFAULT_STEP_BUDGET, EnsembleStats, run_ensemble
from .errors import DomainError, RegimeError
from .exact_moments import l_moments, mean_S, mean_S_power, poch_moment_Sigma, raw_moment_Sigma
from .params import Regime, WalkParams, validate_params
from .specfun import coeff_a, ml_moment
from .stats import (cdf_distance, excess_kurtosis, half_normal_cdf,
                    moment_with_se, normal_cdf, skewness, variance_with_se)

MOMENT_DRIFT_REL = 0.05
CDF_BUDGET_LARGE_N = 0.02
CDF_BUDGET_SMALL_N = 0.06
CRITICAL_MULTIPLIER = 2.0
LARGE_N = 10 ** 6
SKEW_CAP = 0.05
XKURT_CAP = 0.15
# floor accounting for float error of the closed-form targets themselves;
# matters only in degenerate corners where the sample is constant (SE = 0)
TIGHT_FLOOR = 1e-9
DEFAULT_M_FAR_FACTOR = 256


@dataclass(frozen=True)
class Check:
    name: str
    target: float
    estimate: float
    std_err: float
    tolerance: float
    passed: bool
    gated: bool = True
    note: str = ""


@dataclass(frozen=True)
class TestReport:
    test: str
    theorem: str
    params: WalkParams
    n: int
    R: int
    base_seed: int
    checks: tuple
    verdict: str
    notes: tuple = ()
    m_far: int | None = None

    def as_dict(self) -> dict:
        return {
            "test": self.test,
            "theorem": self.theorem,
            "params": self.params.as_dict(),
            "n": self.n,
            "R": self.R,
            "base_seed": self.base_seed,
            "m_far": self.m_far,
            "names": [c.name for c in self.checks],
            "targets": [c.target for c in self.checks],
            "estimates": [c.estimate for c in self.checks],
            "std_errs": [c.std_err for c in self.checks],
            "tolerances": [c.tolerance for c in self.checks],
            "passed": [c.passed for c in self.checks],
            "gated": [c.gated for c in self.checks],
            "check_notes": [c.note for c in self.checks],
            "verdict": self.verdict,
            "notes": list(self.notes),
            "version": __version__,
        }


def _check(name, target, estimate, std_err, tolerance, gated=True, note="") -> Check:
    return Check(name=name, target=float(target), estimate=float(estimate),
                 std_err=float(std_err), tolerance=float(tolerance),
                 passed=bool(abs(estimate - target) <= tolerance),
                 gated=gated, note=note)


def _verdict(checks) -> str:
    return "PASS" if all(c.passed for c in checks if c.gated) else "FAIL"


def _cdf_budget(n: int, doubled: bool = False) -> float:
    base = CDF_BUDGET_LARGE_N if n >= LARGE_N else CDF_BUDGET_SMALL_N
    return base * (CRITICAL_MULTIPLIER if doubled else 1.0)


def verify_ml_limit(params: WalkParams, n: int, R: int, base_seed: int,
                    threads: int | None = None,
                    stats: EnsembleStats | None = None) -> TestReport:
    """Moments of Sigma_n/n^(1-r) against exact finite-n values (tight) and
    Mittag-Leffler(1-r) limit moments (loose); for r=1/2 also the CDF
    distance to |N(0,2)|."""
    c = validate_params(params)
    if stats is None:
        stats = run_ensemble(params, n, R, base_seed, threads=threads)
    scale = float(n) ** c.b
    Z = stats.Sigma.astype(np.float64) / scale
    checks = []
    for m in range(1, 5):
        est, se = moment_with_se(Z, m)
        exact = raw_moment_Sigma(params, n, m) / scale ** m
        checks.append(_check(f"moment{m}_vs_exact", exact, est, se,
                             4.0 * se + TIGHT_FLOOR * max(1.0, abs(exact)),
                             note="tight: exact finite-n, 4 SE"))
        limit = ml_moment(c.b, m)
        checks.append(_check(f"moment{m}_vs_limit", limit, est, se,
                             4.0 * se + MOMENT_DRIFT_REL * abs(limit),
                             note="loose: asymptotic target, 4 SE + 5% drift budget"))
    if abs(c.b - 0.5) <= 1e-12:
        d = cdf_distance(Z, lambda x: half_normal_cdf(x, sigma=math.sqrt(2.0)))
        checks.append(_check("cdf_distance_halfnormal", 0.0, d, 0.0,
                             _cdf_budget(n), note="|N(0,2)| comparison at r=1/2"))
    return TestReport(
        test="ml-limit",
        theorem="number-of-ones scaling: Sigma_n/n^(1-r) -> Mittag-Leffler(1-r)",
        params=params, n=n, R=R, base_seed=stats.base_seed,
        checks=tuple(checks), verdict=_verdict(checks))


def verify_clt_diffusive(params: WalkParams, n: int, R: int, base_seed: int,
                         threads: int | None = None,
                         stats: EnsembleStats | None = None) -> TestReport:
    """Self-normalized statistic S_n/sqrt(Sigma_n) against N(0, sigma_r^2),
    plus the mixing form S_n/n^((1-r)/2) whose variance is sigma_r^2 E[Sigma']."""
    c = validate_params(params)
    if c.regime is not Regime.DIFFUSIVE:
        raise RegimeError(f"diffusive verify needs the diffusive regime, got {c.regime.value}")
    if stats is None:
        stats = run_ensemble(params, n, R, base_seed, threads=threads)
    sigma2 = c.sigma_r2
    sigma = math.sqrt(sigma2)
    T = stats.S / np.sqrt(stats.Sigma.astype(np.float64))

    mean_est, mean_se = moment_with_se(T, 1)
    # First-order finite-n drift of the mean: E[S_n]/sqrt(E[Sigma_n]).
    drift = abs(mean_S(params, n)) / math.sqrt(poch_moment_Sigma(params, n, 1))
    var_est, var_se = variance_with_se(T)
    checks = [
        _check("mean", 0.0, mean_est, mean_se,
               4.0 * mean_se + drift + 0.01 * sigma,
               note="4 SE + exact first-order drift + 1% of sigma_r"),
        _check("variance", sigma2, var_est, var_se,
               4.0 * var_se + MOMENT_DRIFT_REL * sigma2,
               note="4 SE + 5% drift budget"),
        _check("skewness", 0.0, skewness(T), math.sqrt(6.0 / R), SKEW_CAP),
        _check("excess_kurtosis", 0.0, excess_kurtosis(T), math.sqrt(24.0 / R), XKURT_CAP),
        _check("cdf_distance_normal", 0.0,
               cdf_distance(T, lambda x: normal_cdf(x, sigma=sigma)), 0.0,
               _cdf_budget(n)),
    ]
    U = stats.S / float(n) ** (c.b / 2.0)
    mix_target = sigma2 * ml_moment(c.b, 1)
    mix_est, mix_se = variance_with_se(U)
    checks.append(_check("mixing_variance", mix_target, mix_est, mix_se,
                         4.0 * mix_se + MOMENT_DRIFT_REL * mix_target,
                         note="variance of S_n/n^((1-r)/2) vs sigma_r^2*E[Sigma']"))
    return TestReport(
        test="clt-diffusive",
        theorem="self-normalized CLT, diffusive regime",
        params=params, n=n, R=R, base_seed=stats.base_seed,
        checks=tuple(checks), verdict=_verdict(checks))


def verify_clt_critical(params: WalkParams, n: int, R: int, base_seed: int,
                        threads: int | None = None,
                        stats: EnsembleStats | None = None) -> TestReport:
    """S_n/sqrt(Sigma_n log Sigma_n) against N(0,1) with doubled budgets
    (log-rate convergence). Shape checks are reported but ungated."""
    c = validate_params(params)
    if c.regime is not Regime.CRITICAL:
        raise RegimeError(f"critical verify needs the critical regime, got {c.regime.value}")
    if stats is None:
        stats = run_ensemble(params, n, R, base_seed, threads=threads)
    sig = stats.Sigma.astype(np.float64)
    usable = sig > math.e  # statistic undefined below the log threshold
    dropped = int(stats.R - usable.sum())
    T = stats.S[usable] / np.sqrt(sig[usable] * np.log(sig[usable]))

    e_sig = poch_moment_Sigma(params, n, 1)
    drift = 1.5 * abs(mean_S(params, n)) / math.sqrt(e_sig * math.log(e_sig))
    mean_est, mean_se = moment_with_se(T, 1)
    var_est, var_se = variance_with_se(T)
    checks = [
        _check("mean", 0.0, mean_est, mean_se, 4.0 * mean_se + drift + 0.01,
               note="4 SE + 1.5x exact first-order drift + 0.01"),
        _check("variance", 1.0, var_est, var_se,
               4.0 * var_se + CRITICAL_MULTIPLIER * MOMENT_DRIFT_REL,
               note="4 SE + 10% drift budget (doubled: log-rate convergence)"),
        _check("cdf_distance_normal", 0.0,
               cdf_distance(T, normal_cdf), 0.0, _cdf_budget(n, doubled=True)),
        _check("skewness", 0.0, skewness(T), math.sqrt(6.0 / R), SKEW_CAP,
               gated=False, note="diagnostic only at the critical rate"),
        _check("excess_kurtosis", 0.0, excess_kurtosis(T), math.sqrt(24.0 / R),
               XKURT_CAP, gated=False, note="diagnostic only at the critical rate"),
    ]
    notes = [f"replicates with Sigma_n <= e dropped (statistic undefined): {dropped}"]
    return TestReport(
        test="clt-critical",
        theorem="self-normalized CLT with logarithmic rate, critical regime",
        params=params, n=n, R=R, base_seed=stats.base_seed,
        checks=tuple(checks), verdict=_verdict(checks), notes=tuple(notes))


def verify_superdiffusive(params: WalkParams, n: int, R: int, base_seed: int,
                          threads: int | None = None,
                          stats: EnsembleStats | None = None) -> TestReport:
    """Moments of S_n/n^(2p+r-1) against exact finite-n values (tight) and the
    limit moments of L (loose)."""
    c = validate_params(params)
    if c.regime is not Regime.SUPERDIFFUSIVE:
        raise RegimeError(
            f"superdiffusive verify needs the superdiffusive regime, got {c.regime.value}")
    if stats is None:
        stats = run_ensemble(params, n, R, base_seed, threads=threads)
    Z = stats.S / float(n) ** c.sd_exponent
    limits = l_moments(params)
    scale2 = limits[1]  # E[L^2] > 0 sets the scale for near-zero odd targets
    checks = []
    for m in range(1, 5):
        est, se = moment_with_se(Z, m)
        exact = mean_S_power(params, n, m) / float(n) ** (m * c.sd_exponent)
        checks.append(_check(f"moment{m}_vs_exact", exact, est, se,
                             4.0 * se + TIGHT_FLOOR * max(1.0, abs(exact)),
                             note="tight: exact finite-n, 4 SE"))
        target = limits[m - 1]
        scale = max(abs(target), scale2 ** (m / 2.0))
        checks.append(_check(f"moment{m}_vs_limit", target, est, se,
                             4.0 * se + MOMENT_DRIFT_REL * scale,
                             note="loose: asymptotic target, 4 SE + 5% drift budget"))
    return TestReport(
        test="superdiffusive",
        theorem="almost-sure limit of S_n/n^(2p+r-1): first four moments of L",
        params=params, n=n, R=R, base_seed=stats.base_seed,
        checks=tuple(checks), verdict=_verdict(checks))


def verify_fluctuation_sr(params: WalkParams, n: int, m_far: int, R: int,
                          base_seed: int, threads: int | None = None,
                          step_budget: int = DEFAULT_STEP_BUDGET,
                          stats: EnsembleStats | None = None) -> TestReport:
    """Gaussian fluctuation around the superdiffusive limit: per replicate the
    limit L is estimated from the same path continued to m_far, and
    (S_n - n^a L_hat)/sqrt(Sigma_n) is tested against N(0, tau_r^2)."""
    c = validate_params(params)
    if c.regime is not Regime.SUPERDIFFUSIVE:
        raise RegimeError(
            f"fluctuation verify needs the superdiffusive regime, got {c.regime.value}")
    if m_far < 100 * n:
        raise DomainError(f"m_far must be >= 100*n, got m_far={m_far}, n={n}")
    if stats is None:
        stats = run_ensemble(params, n, R, base_seed, threads=threads,
                             m_far=m_far, step_budget=step_budget)
    a = c.a
    tau2 = c.tau_r2
    l_hat = coeff_a(m_far, a) * stats.S_far / math.gamma(a + 1.0)
    F = (stats.S - float(n) ** a * l_hat) / np.sqrt(stats.Sigma.astype(np.float64))

    mean_est, mean_se = moment_with_se(F, 1)
    var_est, var_se = variance_with_se(F)
    tau = math.sqrt(tau2)
    checks = [
        _check("mean", 0.0, mean_est, mean_se, 4.0 * mean_se + 0.01 * tau,
               note="4 SE + 1% of tau_r"),
        _check("variance", tau2, var_est, var_se,
               4.0 * var_se + CRITICAL_MULTIPLIER * MOMENT_DRIFT_REL * tau2,
               note="4 SE + 10% drift budget (L_hat substitution bias included)"),
        _check("cdf_distance_normal", 0.0,
               cdf_distance(F, lambda x: normal_cdf(x, sigma=tau)), 0.0,
               _cdf_budget(n)),
    ]
    notes = (
        "L_hat = a_m S_m / Gamma(a+1) at m = m_far substitutes the almost-sure "
        "limit L; the substitution bias decays like a power of n/m_far and is "
        "covered by the variance drift budget.",
    )
    return TestReport(
        test="fluctuation",
        theorem="Gaussian fluctuation of S_n around n^(2p+r-1) L, superdiffusive regime",
        params=params, n=n, R=R, base_seed=stats.base_seed,
        checks=tuple(checks), verdict=_verdict(checks), notes=notes, m_far=m_far)


@dataclass(frozen=True)
class VerifyDefaults:
    params: WalkParams
    n: int
    R: int
    seed: int
    m_far: int | None = None


VERIFY_DEFAULTS = {
    "ml-limit": VerifyDefaults(WalkParams(0.25, 0.25, 0.5, 1.0), 10 ** 6, 10 ** 5, 42),
    "clt-diffusive": VerifyDefaults(WalkParams(0.3, 0.3, 0.4, 1.0), 10 ** 6, 10 ** 5, 42),
    "clt-critical": VerifyDefaults(WalkParams(0.6, 0.2, 0.2, 0.5), 10 ** 6, 10 ** 5, 42),
    "superdiffusive": VerifyDefaults(WalkParams(0.6, 0.1, 0.3, 1.0), 10 ** 6, 10 ** 5, 42),
    "fluctuation": VerifyDefaults(WalkParams(0.7, 0.1, 0.2, 1.0), 10 ** 4, 2 * 10 ** 4, 42,
                                  m_far=DEFAULT_M_FAR_FACTOR * 10 ** 4),
}

VERIFIERS = {
    "ml-limit": verify_ml_limit,
    "clt-diffusive": verify_clt_diffusive,
    "clt-critical": verify_clt_critical,
    "superdiffusive": verify_superdiffusive,
    "fluctuation": verify_fluctuation_sr,
}


def run_verify(test: str, params: WalkParams, n: int, R: int, base_seed: int,
               m_far: int | None = None, threads: int | None = None) -> TestReport:
    if test not in VERIFIERS:
        raise DomainError(f"unknown verify test {test!r}; choose from {sorted(VERIFIERS)}")
    if test == "fluctuation":
        if m_far is None:
            m_far = DEFAULT_M_FAR_FACTOR * n
        return verify_fluctuation_sr(params, n, m_far, R, base_seed, threads=threads)
    return VERIFIERS[test](params, n, R, base_seed, threads=threads)
