"""Martingale tracks along simulated paths, plus LIL diagnostic scalings.

Two martingales drive everything: M_n = a_n S_n and N_n = b_n Sigma_n, with
increments eps_n = S_n - (1+a/(n-1)) S_{n-1} and xi_n analogous. The
predictable variation of M decomposes as <M>_n = 1 + b V_n - a^2 W_n where
V_n and W_n are weighted partial sums of Sigma_k/k and (S_k/k)^2; the scan
accumulates both forms plus the raw quadratic variation [M]_n in one pass.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, MissingIncrements
from .params import DerivedConstants, Regime
from .simulator import PathRecord

_LIL_DIFFUSIVE_MIN = math.e        # log log needs Sigma > e
_LIL_CRITICAL_MIN = math.e ** math.e  # log log log needs Sigma > e^e


@dataclass(frozen=True)
class MartingaleTrack:
    ns: np.ndarray
    S: np.ndarray
    Sigma: np.ndarray
    a_n: np.ndarray
    b_n: np.ndarray
    M: np.ndarray
    N: np.ndarray
    eps: np.ndarray
    xi: np.ndarray
    predvar: np.ndarray   # <M>_n
    quadvar: np.ndarray   # [M]_n
    V: np.ndarray
    W: np.ndarray
    add_M: np.ndarray     # sum_{k<=n} a_k eps_k, must equal M_n
    add_N: np.ndarray     # sum_{k<=n} b_k xi_k, must equal N_n


def track(path: PathRecord, c: DerivedConstants) -> MartingaleTrack:
    """Compute all martingale sequences at the path's checkpoint grid."""
    if path.increments is None:
        raise MissingIncrements("martingale track needs a path with full increments")
    grid = np.asarray(path.ns, dtype=np.int64)
    k = len(grid)
    arrays = [np.empty(k, dtype=np.int64) for _ in range(2)]
    farrays = [np.empty(k, dtype=np.float64) for _ in range(12)]
    _kernels.martingale_scan(path.increments, c.a, c.b, grid, arrays[0], arrays[1], *farrays)
    return MartingaleTrack(ns=grid, S=arrays[0], Sigma=arrays[1],
                           a_n=farrays[0], b_n=farrays[1], M=farrays[2], N=farrays[3],
                           eps=farrays[4], xi=farrays[5], predvar=farrays[6],
                           quadvar=farrays[7], V=farrays[8], W=farrays[9],
                           add_M=farrays[10], add_N=farrays[11])


def lil_statistic(S: float, Sigma: float, regime: Regime) -> float:
    """LIL-scaled statistic at one checkpoint. Diagnostic only; the critical
    regime uses the log-rate scaling, the others the log-log scaling."""
    if regime is Regime.CRITICAL:
        if Sigma <= _LIL_CRITICAL_MIN:
            raise DomainError(
                f"critical LIL scaling needs Sigma > e^e, got {Sigma}")
        ln = math.log(Sigma)
        return S / math.sqrt(2.0 * Sigma * ln * math.log(math.log(ln)))
    if Sigma <= _LIL_DIFFUSIVE_MIN:
        raise DomainError(f"LIL scaling needs Sigma > e, got {Sigma}")
    return S / math.sqrt(2.0 * Sigma * math.log(math.log(Sigma)))


def lil_series(S, Sigma, regime: Regime) -> np.ndarray:
    """Vector form of lil_statistic with NaN below the log thresholds, so
    whole checkpoint series serialize without error."""
    S = np.asarray(S, dtype=np.float64)
    Sigma = np.asarray(Sigma, dtype=np.float64)
    out = np.full(S.shape, np.nan)
    if regime is Regime.CRITICAL:
        ok = Sigma > _LIL_CRITICAL_MIN
        ln = np.log(Sigma[ok])
        out[ok] = S[ok] / np.sqrt(2.0 * Sigma[ok] * ln * np.log(np.log(ln)))
    else:
        ok = Sigma > _LIL_DIFFUSIVE_MIN
        out[ok] = S[ok] / np.sqrt(2.0 * Sigma[ok] * np.log(np.log(Sigma[ok])))
    return out
