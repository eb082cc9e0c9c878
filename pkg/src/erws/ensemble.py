"""Replicate ensembles: deterministic, scheduling-independent parallel runs.

Replicate i always uses RNG stream (base_seed, i) and writes only its own
output slot, so the result arrays are byte-identical for any worker count or
scheduling order. Workers are plain threads; the compiled kernels release
the GIL.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetError, DomainError
from .params import WalkParams, validate_params
from .stats import moment_with_se

DEFAULT_STEP_BUDGET = 10 ** 12
THREADS_ENV = "ERWS_THREADS"


@dataclass(frozen=True)
class EnsembleStats:
    params: WalkParams
    n: int
    R: int
    base_seed: int
    S: np.ndarray          # terminal S_n per replicate
    Sigma: np.ndarray      # terminal Sigma_n per replicate
    m_far: int | None = None
    S_far: np.ndarray | None = None
    Sigma_far: np.ndarray | None = None
    summaries: dict | None = None  # {name: (mean, se)} for requested functionals


def resolve_threads(threads: int | None = None) -> int:
    """Flag wins over the ERWS_THREADS environment variable, which wins over
    the CPU count. Thread count never changes results, only wall time."""
    if threads is not None:
        if threads < 1:
            raise DomainError(f"thread count must be >= 1, got {threads}")
        return threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise DomainError(f"{THREADS_ENV}={env!r} is not an integer") from exc
        if value < 1:
            raise DomainError(f"{THREADS_ENV} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def _blocks(R: int, threads: int):
    block = max(256, math.ceil(R / (threads * 8)))
    return [(lo, min(lo + block, R)) for lo in range(0, R, block)]


def run_ensemble(params: WalkParams, n: int, R: int, base_seed: int,
                 threads: int | None = None, m_far: int | None = None,
                 functionals: dict | None = None,
                 step_budget: int = DEFAULT_STEP_BUDGET) -> EnsembleStats:
    """Simulate R replicates to horizon n (optionally continuing each path to
    m_far) and return the per-replicate terminals, plus mean/SE summaries of
    any requested functionals of (S, Sigma)."""
    c = validate_params(params)
    if n < 1 or R < 1:
        raise DomainError(f"need n >= 1 and R >= 1, got n={n}, R={R}")
    if m_far is not None and m_far <= n:
        raise DomainError(f"m_far must exceed n, got m_far={m_far} <= n={n}")
    total_steps = R * (m_far if m_far is not None else n)
    if total_steps > step_budget:
        raise BudgetError(
            f"{total_steps:.3g} steps exceed the step budget {step_budget:.3g}")

    threads = resolve_threads(threads)
    seed = np.uint64(base_seed)
    S = np.empty(R, dtype=np.int64)
    Sig = np.empty(R, dtype=np.int64)
    if m_far is None:
        S_far = Sig_far = None

        def work(lo, hi):
            _kernels.terminal_block(c.a, c.b, params.s, n, seed, lo, hi, S, Sig)
    else:
        S_far = np.empty(R, dtype=np.int64)
        Sig_far = np.empty(R, dtype=np.int64)

        def work(lo, hi):
            _kernels.two_horizon_block(c.a, c.b, params.s, n, m_far, seed,
                                       lo, hi, S, Sig, S_far, Sig_far)

    blocks = _blocks(R, threads)
    if threads == 1 or len(blocks) == 1:
        for lo, hi in blocks:
            work(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for future in [pool.submit(work, lo, hi) for lo, hi in blocks]:
                future.result()

    stats = EnsembleStats(params=params, n=n, R=R, base_seed=base_seed,
                          S=S, Sigma=Sig, m_far=m_far, S_far=S_far,
                          Sigma_far=Sig_far)
    if functionals:
        stats = EnsembleStats(params=params, n=n, R=R, base_seed=base_seed,
                              S=S, Sigma=Sig, m_far=m_far, S_far=S_far,
                              Sigma_far=Sig_far,
                              summaries=summarize(stats, functionals))
    return stats


def summarize(stats: EnsembleStats, functionals: dict) -> dict:
    """Sample mean and standard error of each functional(S, Sigma) array."""
    if stats.R < 2:
        raise DomainError("standard errors need R >= 2")
    out = {}
    for name, fn in functionals.items():
        out[name] = moment_with_se(np.asarray(fn(stats.S, stats.Sigma),
                                              dtype=np.float64), 1)
    return out
