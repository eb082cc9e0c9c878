"""Compiled inner loops (numba). All kernels release the GIL and are
deterministic functions of their arguments; thread scheduling cannot change
any output byte.

The uint64 arithmetic here mirrors ``rng`` exactly; ``tests/test_rng.py``
asserts bit-for-bit agreement between the two implementations.
"""

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX_A = np.uint64(0xBF58476D1CE4E5B9)
MIX_B = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / (1 << 53)
_U11 = np.uint64(11)
_U27 = np.uint64(27)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_ONE = np.uint64(1)


@njit(cache=True, nogil=True, inline="always")
def mix64(z):
    z = (z ^ (z >> _U30)) * MIX_A
    z = (z ^ (z >> _U27)) * MIX_B
    return z ^ (z >> _U31)


@njit(cache=True, nogil=True)
def stream_key(base_seed, replicate):
    k = mix64(base_seed + GOLDEN)
    return mix64(k ^ (replicate * MIX_B + GOLDEN))


@njit(cache=True, nogil=True, inline="always")
def u01(key, counter):
    z = mix64(key + (counter + _ONE) * GOLDEN)
    return np.float64(z >> _U11) * _INV53


# Sampling convention, fixed for bit-reproducibility: one uniform u per step,
# thresholds in the order (+1, -1, 0). With w = u*(2n), step +1 iff
# w < b*Sig + a*S, step -1 iff w < 2*b*Sig, else 0. Division-free but
# equivalent to comparing u against the step-law probabilities.


@njit(cache=True, nogil=True)
def terminal_block(a, b, s, horizon, base_seed, lo, hi, out_S, out_Sig):
    """Simulate replicates [lo, hi), storing terminal (S_n, Sigma_n)."""
    for rep in range(lo, hi):
        key = stream_key(base_seed, np.uint64(rep))
        S = 1.0 if u01(key, np.uint64(0)) < s else -1.0
        Sig = 1.0
        two_n = 2.0
        ctr = _ONE
        for _ in range(1, horizon):
            w = u01(key, ctr) * two_n
            ctr += _ONE
            if w < b * Sig + a * S:
                S += 1.0
                Sig += 1.0
            elif w < 2.0 * b * Sig:
                S -= 1.0
                Sig += 1.0
            two_n += 2.0
        out_S[rep] = np.int64(S)
        out_Sig[rep] = np.int64(Sig)


@njit(cache=True, nogil=True)
def two_horizon_block(a, b, s, n1, n2, base_seed, lo, hi,
                      out_S1, out_Sig1, out_S2, out_Sig2):
    """Like terminal_block but also records the state at the earlier time n1."""
    for rep in range(lo, hi):
        key = stream_key(base_seed, np.uint64(rep))
        S = 1.0 if u01(key, np.uint64(0)) < s else -1.0
        Sig = 1.0
        if n1 == 1:
            out_S1[rep] = np.int64(S)
            out_Sig1[rep] = 1
        two_n = 2.0
        ctr = _ONE
        for n in range(1, n2):
            w = u01(key, ctr) * two_n
            ctr += _ONE
            if w < b * Sig + a * S:
                S += 1.0
                Sig += 1.0
            elif w < 2.0 * b * Sig:
                S -= 1.0
                Sig += 1.0
            two_n += 2.0
            if n + 1 == n1:
                out_S1[rep] = np.int64(S)
                out_Sig1[rep] = np.int64(Sig)
        out_S2[rep] = np.int64(S)
        out_Sig2[rep] = np.int64(Sig)


@njit(cache=True, nogil=True)
def path_checkpoints(a, b, s, base_seed, replicate, grid, out_S, out_Sig):
    """One path; record (S_n, Sigma_n) at each n in the ascending grid."""
    key = stream_key(base_seed, np.uint64(replicate))
    S = 1.0 if u01(key, np.uint64(0)) < s else -1.0
    Sig = 1.0
    g = 0
    if grid[0] == 1:
        out_S[0] = np.int64(S)
        out_Sig[0] = 1
        g = 1
    horizon = grid[len(grid) - 1]
    two_n = 2.0
    ctr = _ONE
    for n in range(1, horizon):
        w = u01(key, ctr) * two_n
        ctr += _ONE
        if w < b * Sig + a * S:
            S += 1.0
            Sig += 1.0
        elif w < 2.0 * b * Sig:
            S -= 1.0
            Sig += 1.0
        two_n += 2.0
        if n + 1 == grid[g]:
            out_S[g] = np.int64(S)
            out_Sig[g] = np.int64(Sig)
            g += 1


@njit(cache=True, nogil=True)
def path_increments(a, b, s, base_seed, replicate, horizon, out_steps):
    """One path; store every increment X_k (int8) for k = 1..horizon."""
    key = stream_key(base_seed, np.uint64(replicate))
    x = 1 if u01(key, np.uint64(0)) < s else -1
    out_steps[0] = x
    S = np.float64(x)
    Sig = 1.0
    two_n = 2.0
    ctr = _ONE
    for n in range(1, horizon):
        w = u01(key, ctr) * two_n
        ctr += _ONE
        if w < b * Sig + a * S:
            S += 1.0
            Sig += 1.0
            out_steps[n] = 1
        elif w < 2.0 * b * Sig:
            S -= 1.0
            Sig += 1.0
            out_steps[n] = -1
        else:
            out_steps[n] = 0
        two_n += 2.0


@njit(cache=True, nogil=True)
def martingale_scan(steps, a, b, grid,
                    out_S, out_Sig, out_ak, out_bk, out_M, out_N,
                    out_eps, out_xi, out_predvar, out_quadvar,
                    out_V, out_W, out_addM, out_addN):
    """Single pass over increments, recording all tracked sequences at the
    checkpoint grid. Coefficients advance by the exact one-step recurrences
    a_{k+1} = a_k * k/(k+a), b_{k+1} = b_k * k/(k+b)."""
    S = np.float64(steps[0])
    Sig = 1.0
    ak = 1.0
    bk = 1.0
    eps = S            # eps_1 = S_1
    xi = 1.0           # xi_1 = Sigma_1
    predvar = 1.0      # a_1^2 * E[eps_1^2] = 1
    quadvar = S * S    # a_1^2 * eps_1^2
    V = 0.0
    W = 0.0
    addM = ak * eps
    addN = bk * xi
    g = 0
    if grid[0] == 1:
        out_S[0] = np.int64(S)
        out_Sig[0] = 1
        out_ak[0] = ak
        out_bk[0] = bk
        out_M[0] = ak * S
        out_N[0] = bk * Sig
        out_eps[0] = eps
        out_xi[0] = xi
        out_predvar[0] = predvar
        out_quadvar[0] = quadvar
        out_V[0] = V
        out_W[0] = W
        out_addM[0] = addM
        out_addN[0] = addN
        g = 1
    horizon = grid[len(grid) - 1]
    for k in range(2, horizon + 1):
        km1 = np.float64(k - 1)
        ak = ak * km1 / (km1 + a)
        bk = bk * km1 / (km1 + b)
        sig_rate = Sig / km1
        s_rate = S / km1
        V += ak * ak * sig_rate
        W += ak * ak * s_rate * s_rate
        predvar += ak * ak * (b * sig_rate - a * a * s_rate * s_rate)
        x = np.float64(steps[k - 1])
        eps = x - a * s_rate
        xi = x * x - b * sig_rate
        addM += ak * eps
        addN += bk * xi
        quadvar += ak * ak * eps * eps
        S += x
        Sig += x * x
        if k == grid[g]:
            out_S[g] = np.int64(S)
            out_Sig[g] = np.int64(Sig)
            out_ak[g] = ak
            out_bk[g] = bk
            out_M[g] = ak * S
            out_N[g] = bk * Sig
            out_eps[g] = eps
            out_xi[g] = xi
            out_predvar[g] = predvar
            out_quadvar[g] = quadvar
            out_V[g] = V
            out_W[g] = W
            out_addM[g] = addM
            out_addN[g] = addN
            g += 1


@njit(cache=True, nogil=True)
def v_partial_sums(a, b, checkpoints):
    """Partial sums of sum_{k>=1} a_k^2/(k b_k) at each ascending checkpoint."""
    out = np.empty(len(checkpoints), np.float64)
    ak = 1.0
    bk = 1.0
    acc = 0.0
    g = 0
    nmax = checkpoints[len(checkpoints) - 1]
    for k in range(1, nmax + 1):
        acc += ak * ak / (k * bk)
        if k == checkpoints[g]:
            out[g] = acc
            g += 1
        kf = np.float64(k)
        ak = ak * kf / (kf + a)
        bk = bk * kf / (kf + b)
    return out
