import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from erws.errors import ConvergenceFailure, DomainError
from erws.specfun import (SeriesControl, coeff_a, coeff_b, coeff_bm, log_gamma,
                          ml_density, ml_mgf, ml_moment, pochhammer, rising_ratio,
                          stirling1u, v_limit, v_partial, v_partial_grid)


class TestLogGamma:
    def test_integer_anchors(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-15)

    def test_half(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)

    def test_exp_accuracy_vs_mpmath(self):
        mp.mp.dps = 40
        for x in [1e-3, 0.1, 0.5, 1.5, 2.0, 7.7, 33.0, 101.5, 170.0]:
            ref = float(mp.log(mp.gamma(x)))
            got = log_gamma(x)
            # relative error of exp(log_gamma) vs Gamma
            assert abs(math.expm1(got - ref)) < 1e-12

    def test_log_accuracy_large_arguments(self):
        mp.mp.dps = 40
        for x in [1e3, 1e5, 1e7]:
            ref = mp.loggamma(x)
            assert abs(log_gamma(x) - float(ref)) <= 4 * abs(float(ref)) * 2.3e-16

    def test_domain(self):
        for bad in (0.0, -1.0, math.nan, math.inf):
            with pytest.raises(DomainError):
                log_gamma(bad)


class TestCoefficients:
    def test_first_terms_are_one(self):
        assert coeff_a(1, 0.37) == 1.0
        assert coeff_b(1, 0.9) == 1.0

    def test_zero_parameter_gives_all_ones(self):
        assert all(coeff_a(n, 0.0) == pytest.approx(1.0, rel=1e-14)
                   for n in (1, 2, 10, 1000))

    def test_matches_product_definition(self):
        a = 0.45
        prod = 1.0
        for n in range(1, 40):
            assert coeff_a(n, a) == pytest.approx(prod, rel=1e-13)
            prod /= 1.0 + a / n

    def test_scaling_limit(self):
        # n^a * a_n -> Gamma(a+1), relative error <= 10/n
        for c in (0.5, 0.2, 0.95, -0.4):
            target = math.gamma(c + 1.0)
            for n in (10**3, 10**4, 10**5, 10**6):
                got = n**c * coeff_a(n, c)
                assert abs(got / target - 1.0) <= 10.0 / n

    def test_half_million_limit_anchor(self):
        got = (10**6) ** 0.5 * coeff_a(10**6, 0.5)
        assert got == pytest.approx(math.gamma(1.5), abs=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            coeff_a(0, 0.5)
        with pytest.raises(DomainError):
            coeff_a(5, -1.0)

    def test_bm_at_n1(self):
        for m in (1, 2, 5):
            assert coeff_bm(1, m, 0.7) == pytest.approx(1.0, rel=1e-14)

    def test_bm_inverse_identity(self):
        for n in range(1, 1001, 7):
            assert coeff_bm(n, 1, 0.7) * coeff_b(n, 0.7) == pytest.approx(1.0, abs=1e-12)

    def test_bm_product_bound(self):
        b = 0.7
        for n in range(2, 1001, 13):
            bn = coeff_b(n, b)
            for m in range(1, 7):
                assert coeff_bm(n, m, b) * bn**m <= 1.0 + 1e-12

    def test_bm_pole(self):
        with pytest.raises(DomainError):
            coeff_bm(3, 2, -0.6)

    def test_rising_ratio_routes_agree(self):
        for c in (0.3, 0.9, 2.8):
            for n in (500, 512, 513, 600):
                direct = math.exp(math.lgamma(n + c) - math.lgamma(n))
                assert rising_ratio(n, c) == pytest.approx(direct, rel=1e-10)


class TestPochhammerStirling:
    def test_empty_product(self):
        assert pochhammer(3.7, 0) == 1.0

    def test_small_values(self):
        assert pochhammer(3.0, 3) == 60.0
        assert pochhammer(1.0, 5) == 120.0

    def test_shift_identity(self):
        # x * x^(k) = x^(k+1) - k * x^(k) at x=2, k=2: 12 = 24 - 12
        x, k = 2.0, 2
        assert x * pochhammer(x, k) == pochhammer(x, k + 1) - k * pochhammer(x, k)
        for x in (-1.5, 0.3, 4.0):
            for k in range(6):
                assert x * pochhammer(x, k) == pytest.approx(
                    pochhammer(x, k + 1) - k * pochhammer(x, k), rel=1e-12, abs=1e-12)

    def test_stirling_base_cases(self):
        assert stirling1u(0, 0) == 1
        assert stirling1u(4, 0) == 0
        assert stirling1u(7, 7) == 1

    def test_stirling_small_rows(self):
        assert stirling1u(3, 1) == 2
        assert stirling1u(3, 2) == 3
        assert sum(stirling1u(4, k) for k in range(5)) == 24

    def test_stirling_row_sums_are_factorials(self):
        for m in range(0, 11):
            assert sum(stirling1u(m, k) for k in range(m + 1)) == math.factorial(m)

    def test_stirling_inverts_pochhammer(self):
        for x in (-2.0, -1.0, 0.5, 1.0, 3.0):
            for m in range(0, 11):
                total = sum(stirling1u(m, k) * x**k for k in range(m + 1))
                want = pochhammer(x, m)
                assert total == pytest.approx(want, rel=1e-10, abs=1e-10)

    def test_stirling_domain(self):
        with pytest.raises(DomainError):
            stirling1u(3, 4)
        with pytest.raises(DomainError):
            stirling1u(31, 2)
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)


class TestMittagLeffler:
    def test_exponential_case(self):
        assert ml_mgf(1.0, 1.0) == pytest.approx(math.e, abs=1e-12)

    def test_zero_argument(self):
        for alpha in (0.0, 0.3, 1.0, 2.0):
            assert ml_mgf(alpha, 0.0) == 1.0

    def test_cosine_case(self):
        assert ml_mgf(2.0, -math.pi**2) == pytest.approx(-1.0, abs=1e-12)
        for z in (0.5, 1.0, 2.0):
            assert ml_mgf(2.0, -z * z) == pytest.approx(math.cos(z), abs=1e-12)

    def test_geometric_case(self):
        for t in (-0.5, 0.2, 0.9):
            assert ml_mgf(0.0, t) == pytest.approx(1.0 / (1.0 - t), rel=1e-12)

    def test_geometric_divergence(self):
        with pytest.raises(ConvergenceFailure):
            ml_mgf(0.0, 1.0, SeriesControl(max_terms=10_000))

    @given(st.floats(0.3, 1.0), st.floats(0.0, 1.0))
    def test_lower_bound_for_nonnegative_argument(self, alpha, frac):
        # all series terms are nonnegative for t >= 0; the argument range is
        # capped so the value stays representable (E_alpha(t) ~ exp(t^(1/alpha)))
        t = frac * 0.9 * 700.0 ** alpha
        value = ml_mgf(alpha, t)
        bound = 1.0 + t / math.gamma(1.0 + alpha)
        assert value >= bound * (1.0 - 1e-12)

    def test_overflowing_argument_fails_loudly(self):
        with pytest.raises(ConvergenceFailure):
            ml_mgf(0.0625, 2.0)

    def test_moments(self):
        assert ml_moment(0.7, 0) == 1.0
        for m in range(1, 9):
            assert ml_moment(1.0, m) == 1.0
        # alpha=1/2, m=2: matches E|Z|^2 with Z ~ N(0, 2)
        assert ml_moment(0.5, 2) == pytest.approx(2.0, rel=1e-14)

    def test_moments_log_convex(self):
        for alpha in (0.1, 0.5, 0.9):
            mom = [ml_moment(alpha, m) for m in range(0, 9)]
            for m in range(1, 8):
                assert mom[m] ** 2 <= mom[m - 1] * mom[m + 1] * (1 + 1e-12)

    def test_density_vanishes_left_of_origin(self):
        assert ml_density(0.3, -1.0) == 0.0
        assert ml_density(0.9, 0.0) == 0.0

    def test_density_half_case_closed_form(self):
        for x in np.linspace(0.01, 5.0, 40):
            want = math.exp(-x * x / 4.0) / math.sqrt(math.pi)
            assert ml_density(0.5, float(x)) == pytest.approx(want, abs=1e-10)

    def test_density_matches_mpmath_series(self):
        mp.mp.dps = 50

        def ref(alpha, x):
            s = mp.mpf(0)
            for n in range(1, 300):
                s += (mp.gamma(1 + alpha * n) * mp.sin(alpha * n * mp.pi)
                      * (-x) ** (n - 1) / mp.factorial(n))
            return float(s / (mp.pi * alpha))

        for alpha, x in [(0.3, 2.0), (0.6, 1.0), (0.8, 2.0), (0.9, 1.0)]:
            assert ml_density(alpha, x) == pytest.approx(ref(alpha, x), rel=1e-9, abs=1e-12)

    def test_density_integrates_to_window_mass(self):
        # quadrature over (0, 5], alpha = 0.6; the window mass 0.9999953006
        # is frozen from a 40-digit mpmath evaluation of the same series
        # (the remaining tail lies outside the certifiable domain)
        xs = np.linspace(1e-9, 5.0, 8001)
        fs = np.array([ml_density(0.6, float(x)) for x in xs])
        mass = np.trapezoid(fs, xs)
        assert mass == pytest.approx(0.99999530059452679, abs=1e-6)

    def test_density_fails_loudly_outside_certified_domain(self):
        with pytest.raises(ConvergenceFailure):
            ml_density(0.5, 9.0)

    def test_density_domain(self):
        with pytest.raises(DomainError):
            ml_density(1.0, 1.0)
        with pytest.raises(DomainError):
            ml_density(0.0, 1.0)


class TestVarianceSeries:
    def test_first_partial_sum(self):
        assert v_partial(1, 0.6, 0.8) == 1.0

    def test_monotone_increasing(self):
        sums = v_partial_grid([1, 2, 4, 8, 64, 512, 4096], 0.6, 0.8)
        assert np.all(np.diff(sums) > 0)

    def test_limit_matches_mpmath_4f3(self):
        mp.mp.dps = 30
        for a, b in [(0.6, 0.8), (0.5, 0.7), (0.7, 0.8), (0.9, 0.95)]:
            r = 1.0 - b
            ref = float(mp.hyper([1, 1, 1, 2 - r], [2, a + 1, a + 1], 1))
            assert v_limit(a, b) == pytest.approx(ref, rel=5e-12)

    def test_partial_sums_approach_limit_from_below(self):
        a, b = 0.6, 0.8
        limit = v_limit(a, b)
        gap = abs(v_partial(10**6, a, b) - limit) / limit
        # the tail decays like n^-(2a-b); at n=1e6 the true gap is ~3.0e-3
        assert 1e-3 < gap < 5e-3
        assert v_partial(10**6, a, b) < limit

    def test_diffusive_growth_constant(self):
        # v_n / n^(b-2a) -> Gamma(a+1)^2/((b-2a) Gamma(b+1)) (a=0, b=0.6)
        ell = 1.0 / (0.6 * math.gamma(1.6))
        got = v_partial(10**6, 0.0, 0.6) / (10**6) ** 0.6
        assert abs(got / ell - 1.0) < 0.01

    def test_limit_requires_superdiffusive_excess(self):
        with pytest.raises(DomainError):
            v_limit(0.3, 0.6)
        with pytest.raises(DomainError):
            v_limit(0.3, 0.61)
