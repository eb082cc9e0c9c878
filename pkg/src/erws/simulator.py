"""Walk simulation with O(1) work per step.

The conditional law of the next step given the past depends only on the
sufficient statistic (n, S_n, Sigma_n): with a = p-q and b = p+q,

    P(+1) = (b*Sigma + a*S)/(2n),  P(-1) = (b*Sigma - a*S)/(2n),
    P(0)  = 1 - b*Sigma/n,

which is exactly the "choose a past step uniformly, then copy/negate/zero"
rule marginalized over the chosen index. Stepping therefore never touches
the history, and a full path costs O(horizon) time and O(1) state.

Sampling draws one uniform per step and applies cumulative thresholds in the
fixed order (+1, -1, 0); the compiled kernels and the pure-Python stepper
below share this convention bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels, rng
from .errors import CapacityError, DomainError
from .params import DerivedConstants, WalkParams, validate_params

MAX_INCREMENT_HORIZON = 10 ** 7


@dataclass
class WalkState:
    """Sufficient statistic plus the RNG stream position."""
    n: int
    S: int
    Sigma: int
    base_seed: int
    replicate: int
    counter: int = 0

    @property
    def key(self) -> int:
        return rng.stream_key(self.base_seed, self.replicate)


@dataclass(frozen=True)
class PathRecord:
    params: WalkParams
    base_seed: int
    replicate: int
    ns: np.ndarray            # checkpoint times, strictly increasing
    S: np.ndarray             # S_n at checkpoints
    Sigma: np.ndarray         # Sigma_n at checkpoints
    increments: np.ndarray | None = None  # full step list X_1..X_horizon (int8)

    @property
    def checkpoints(self) -> list[tuple[int, int, int]]:
        return list(zip(self.ns.tolist(), self.S.tolist(), self.Sigma.tolist()))


def step_law(state: WalkState, c: DerivedConstants) -> tuple[float, float, float]:
    """Exact one-step conditional law (P_plus, P_zero, P_minus)."""
    if state.n < 1:
        raise DomainError("step_law needs an initialized state (n >= 1)")
    n, S, Sig = state.n, state.S, state.Sigma
    p_plus = (c.b * Sig + c.a * S) / (2.0 * n)
    p_minus = (c.b * Sig - c.a * S) / (2.0 * n)
    p_zero = 1.0 - c.b * Sig / n
    return p_plus, p_zero, p_minus


def init_walk(params: WalkParams, base_seed: int, replicate: int) -> WalkState:
    """Draw the first step: +1 with probability s, else -1."""
    validate_params(params)
    key = rng.stream_key(base_seed, replicate)
    u = rng.u01(key, 0)
    s1 = 1 if u < params.s else -1
    return WalkState(n=1, S=s1, Sigma=1, base_seed=base_seed,
                     replicate=replicate, counter=1)


def advance(state: WalkState, c: DerivedConstants) -> int:
    """Advance one step in place; returns the realized increment.

    Mirrors the compiled kernels exactly: w = u*(2n) against cumulative
    thresholds (b*Sigma + a*S, 2*b*Sigma).
    """
    u = rng.u01(state.key, state.counter)
    state.counter += 1
    w = u * (2.0 * state.n)
    f_plus = c.b * state.Sigma + c.a * state.S
    if w < f_plus:
        x = 1
    elif w < 2.0 * c.b * state.Sigma:
        x = -1
    else:
        x = 0
    state.n += 1
    state.S += x
    state.Sigma += x * x
    return x


def default_checkpoint_grid(horizon: int) -> np.ndarray:
    """Geometric grid 1, 2, 4, ... plus the horizon itself."""
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    grid = []
    n = 1
    while n <= horizon:
        grid.append(n)
        n *= 2
    if grid[-1] != horizon:
        grid.append(horizon)
    return np.asarray(grid, dtype=np.int64)


def simulate_path(params: WalkParams, horizon: int, base_seed: int, replicate: int,
                  checkpoint_grid=None, record_increments: bool = False) -> PathRecord:
    """Simulate one path, recording checkpoints (and optionally every step)."""
    c = validate_params(params)
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    if checkpoint_grid is None:
        grid = default_checkpoint_grid(horizon)
    else:
        grid = np.unique(np.asarray(list(checkpoint_grid), dtype=np.int64))
        if len(grid) == 0 or grid[0] < 1 or grid[-1] > horizon:
            raise DomainError("checkpoint grid must lie within [1, horizon]")
        if grid[-1] != horizon:
            grid = np.append(grid, np.int64(horizon))

    increments = None
    out_S = np.empty(len(grid), dtype=np.int64)
    out_Sig = np.empty(len(grid), dtype=np.int64)
    if record_increments:
        if horizon > MAX_INCREMENT_HORIZON:
            raise CapacityError(
                f"increments limited to horizons <= {MAX_INCREMENT_HORIZON}, got {horizon}")
        increments = np.empty(horizon, dtype=np.int8)
        _kernels.path_increments(c.a, c.b, params.s, np.uint64(base_seed),
                                 np.uint64(replicate), horizon, increments)
        steps64 = increments.astype(np.int64)
        cs = np.cumsum(steps64)
        csq = np.cumsum(steps64 * steps64)
        out_S[:] = cs[grid - 1]
        out_Sig[:] = csq[grid - 1]
    else:
        _kernels.path_checkpoints(c.a, c.b, params.s, np.uint64(base_seed),
                                  np.uint64(replicate), grid, out_S, out_Sig)

    return PathRecord(params=params, base_seed=base_seed, replicate=replicate,
                      ns=grid, S=out_S, Sigma=out_Sig, increments=increments)


def reference_path(params: WalkParams, horizon: int, base_seed: int,
                   replicate: int) -> list[int]:
    """Pure-Python stepper; must agree with the kernels bit for bit (tested)."""
    c = validate_params(params)
    state = init_walk(params, base_seed, replicate)
    steps = [state.S]
    for _ in range(horizon - 1):
        steps.append(advance(state, c))
    return steps
