import math

import numpy as np
import pytest

from erws.errors import CapacityError, DomainError
from erws.oracle import _path_probs, _paths
from erws.params import WalkParams, validate_params
from erws.simulator import (WalkState, advance, default_checkpoint_grid, init_walk,
                            reference_path, simulate_path, step_law)

DIFF = WalkParams(0.3, 0.3, 0.4, 1.0)
SUP = WalkParams(0.6, 0.1, 0.3, 0.7)
CRIT = WalkParams(0.6, 0.2, 0.2, 0.5)


class TestStepLaw:
    def test_first_step_state(self):
        p, q, r, s = 0.6, 0.1, 0.3, 1.0
        c = validate_params(WalkParams(p, q, r, s))
        state = WalkState(n=1, S=1, Sigma=1, base_seed=0, replicate=0)
        law = step_law(state, c)
        assert law == pytest.approx((p, r, q))

    def test_two_step_symmetric_state(self):
        c = validate_params(SUP)
        state = WalkState(n=2, S=0, Sigma=2, base_seed=0, replicate=0)
        p_plus, p_zero, p_minus = step_law(state, c)
        assert p_plus == pytest.approx(c.b / 2)
        assert p_minus == pytest.approx(c.b / 2)
        assert p_zero == pytest.approx(1 - c.b)

    def test_law_is_normalized_and_matches_conditional_moments(self):
        c = validate_params(SUP)
        for n, S, Sig in [(5, 3, 5), (10, -4, 8), (7, 0, 2), (9, -9, 9)]:
            state = WalkState(n=n, S=S, Sigma=Sig, base_seed=0, replicate=0)
            pp, pz, pm = step_law(state, c)
            assert 0.0 <= min(pp, pz, pm) and max(pp, pz, pm) <= 1.0
            assert pp + pz + pm == pytest.approx(1.0, abs=1e-15)
            assert pp - pm == pytest.approx(c.a * S / n)   # E[X | state]
            assert pp + pm == pytest.approx(c.b * Sig / n)  # E[X^2 | state]


class TestInitWalk:
    def test_degenerate_first_step(self):
        for seed in range(20):
            assert init_walk(WalkParams(0.3, 0.3, 0.4, 1.0), seed, 0).S == 1
            assert init_walk(WalkParams(0.3, 0.3, 0.4, 0.0), seed, 0).S == -1

    def test_deterministic_given_stream(self):
        a = init_walk(SUP, 42, 11)
        b = init_walk(SUP, 42, 11)
        assert (a.S, a.Sigma, a.n) == (b.S, b.Sigma, b.n)


class TestKernelEquivalence:
    @pytest.mark.parametrize("params", [DIFF, SUP, CRIT, WalkParams(1.0, 0.0, 0.0, 1.0)])
    @pytest.mark.parametrize("seed,rep", [(42, 0), (7, 3), (123456789, 99)])
    def test_reference_matches_kernel(self, params, seed, rep):
        ref = np.array(reference_path(params, 400, seed, rep), dtype=np.int8)
        rec = simulate_path(params, 400, seed, rep, record_increments=True)
        assert np.array_equal(ref, rec.increments)

    def test_checkpoint_and_increment_routes_agree(self):
        rec_a = simulate_path(SUP, 5000, 42, 1, record_increments=True)
        rec_b = simulate_path(SUP, 5000, 42, 1, record_increments=False)
        assert np.array_equal(rec_a.ns, rec_b.ns)
        assert np.array_equal(rec_a.S, rec_b.S)
        assert np.array_equal(rec_a.Sigma, rec_b.Sigma)


class TestStateInvariants:
    def test_long_path_invariants(self):
        c = validate_params(SUP)
        rec = simulate_path(SUP, 10**6, 2024, 5, record_increments=True)
        x = rec.increments.astype(np.int64)
        assert set(np.unique(x)).issubset({-1, 0, 1})
        S = np.cumsum(x)
        Sig = np.cumsum(x * x)
        n = np.arange(1, 10**6 + 1)
        assert np.all(np.abs(S) <= Sig)
        assert np.all(Sig <= n)
        assert Sig[0] == 1
        assert np.all((Sig + S) % 2 == 0)
        assert np.all(np.diff(Sig) >= 0)

    def test_no_stops_means_sigma_equals_n(self):
        rec = simulate_path(WalkParams(0.75, 0.25, 0.0, 0.5), 4096, 3, 0)
        assert np.array_equal(rec.Sigma, rec.ns)

    def test_pure_drift_walk(self):
        rec = simulate_path(WalkParams(1.0, 0.0, 0.0, 1.0), 4096, 3, 0)
        assert np.array_equal(rec.S, rec.ns)

    def test_python_stepper_matches_law(self):
        c = validate_params(CRIT)
        state = init_walk(CRIT, 1, 0)
        for _ in range(500):
            x = advance(state, c)
            assert x in (-1, 0, 1)
            assert abs(state.S) <= state.Sigma <= state.n


class TestGridsAndCaps:
    def test_default_grid_geometric(self):
        grid = default_checkpoint_grid(100)
        assert list(grid) == [1, 2, 4, 8, 16, 32, 64, 100]
        assert list(default_checkpoint_grid(64)) == [1, 2, 4, 8, 16, 32, 64]

    def test_explicit_grid_checked(self):
        with pytest.raises(DomainError):
            simulate_path(DIFF, 100, 1, 0, checkpoint_grid=[0, 5])
        with pytest.raises(DomainError):
            simulate_path(DIFF, 100, 1, 0, checkpoint_grid=[5, 200])

    def test_increment_capacity(self):
        with pytest.raises(CapacityError):
            simulate_path(DIFF, 10**7 + 1, 1, 0, record_increments=True)

    def test_bad_horizon(self):
        with pytest.raises(DomainError):
            simulate_path(DIFF, 0, 1, 0)


def _chi2_sf(stat: float, df: int) -> float:
    import mpmath as mp
    return float(mp.gammainc(df / 2.0, stat / 2.0, mp.inf, regularized=True))


class TestLawEquivalence:
    def test_terminal_distribution_matches_enumeration(self):
        # joint law of (S_6, Sigma_6) from 1e6 simulated replicates vs the
        # exact path-enumeration distribution; chi-square p-value > 0.001
        from erws.ensemble import run_ensemble
        params = SUP
        n, R = 6, 10**6
        _, S, Sig = _paths(n)
        prob = _path_probs(params, n).astype(np.float64)
        exact = {}
        for i in range(len(prob)):
            key = (int(S[i, n - 1]), int(Sig[i, n - 1]))
            exact[key] = exact.get(key, 0.0) + float(prob[i])

        stats = run_ensemble(params, n, R, base_seed=17)
        counts = {}
        for s_val, g_val in zip(stats.S.tolist(), stats.Sigma.tolist()):
            counts[(s_val, g_val)] = counts.get((s_val, g_val), 0) + 1

        assert set(counts) <= set(k for k, v in exact.items() if v > 0)
        # merge low-expectation cells to keep the chi-square approximation valid
        main = [(k, v) for k, v in exact.items() if v * R >= 10]
        rest_p = 1.0 - sum(v for _, v in main)
        rest_o = R - sum(counts.get(k, 0) for k, _ in main)
        stat = sum((counts.get(k, 0) - v * R) ** 2 / (v * R) for k, v in main)
        if rest_p * R > 0:
            stat += (rest_o - rest_p * R) ** 2 / (rest_p * R)
        df = len(main)  # cells (incl. merged) minus 1
        assert _chi2_sf(stat, df) > 0.001

    def test_empirical_mean_matches_exact(self):
        from erws.ensemble import run_ensemble
        from erws.exact_moments import mean_S
        params = SUP
        n, R = 4096, 20_000
        stats = run_ensemble(params, n, R, base_seed=5)
        est = stats.S.mean()
        se = stats.S.std(ddof=1) / math.sqrt(R)
        assert abs(est - mean_S(params, n)) <= 4 * se
