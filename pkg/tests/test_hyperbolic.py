"""Hyperbolic-space kernels: term algebra, heat kernels of both parities,
fractional and logarithmic kernels, asymptotic fits, and the pointwise
operator with its splitting."""

import json
import math

import numpy as np
import pytest

from loglap import hyperbolic as hy
from loglap.quadrature import QuadratureConfig
from loglap.specfun import EULER_GAMMA, bessel_k, upper_gamma

REL_CFG = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-10, max_subdivisions=4000)


def p3_closed(r: float, t: float) -> float:
    return (
        (4.0 * math.pi * t) ** -1.5
        * (r / math.sinh(r))
        * math.exp(-t - r * r / (4.0 * t))
    )


class TestTermAlgebra:
    def test_heat3_is_single_term(self):
        ts = hy.heat_term_sum(3)
        assert len(ts.terms) == 1

    def test_closure_against_finite_differences(self):
        # D^m of the base exponential, algebra vs nested central differences
        for n in (3, 5):
            m = (n - 1) // 2
            base_m2 = m * m

            def base(r, t):
                return math.exp(-base_m2 * t - r * r / (4.0 * t))

            def d_once(f):
                # h balances truncation against the rounding amplification
                # of the nested difference
                def g(r, t, h=1e-4):
                    return (f(r + h, t) - f(r - h, t)) / (2.0 * h) / math.sinh(r)

                return g

            num = base
            for _ in range(m):
                num = d_once(num)
            ts = hy.heat_term_sum(n)
            for r in (0.5, 1.0, 1.5, 2.2, 3.0):
                for t in (0.3, 0.7, 1.0, 2.5):
                    alg = float(ts.evaluate(np.array(r), np.array(t)))
                    ref = num(r, t)
                    assert alg == pytest.approx(ref, rel=1e-6)

    def test_derivative_stays_in_algebra(self):
        ts = hy.heat_term_sum(5).radial_derivative()
        assert all(isinstance(t, hy.RadialTerm) for t in ts.terms)


class TestHeatKernel:
    def test_h3_closed_form(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            r = float(rng.uniform(0.05, 5.0))
            t = float(rng.uniform(0.05, 5.0))
            assert hy.heat_kernel(3, r, t) == pytest.approx(
                p3_closed(r, t), rel=1e-12
            )

    def test_small_time_euclidean_limit(self):
        r, t = 0.5, 1e-4
        scaled = hy.heat_kernel(3, r, t) * (4.0 * math.pi * t) ** 1.5 * math.exp(
            t + r * r / (4.0 * t)
        )
        assert scaled == pytest.approx(r / math.sinh(r), rel=1e-3)

    def test_mass_one(self):
        for n in (2, 3):
            for t in (0.1, 1.0, 10.0):
                assert hy.heat_mass(n, t) == pytest.approx(1.0, abs=1e-8)

    def test_descent_relation_even(self):
        # p_(n+2) = -e^(-n t)/(2 pi sinh r) d/dr p_n
        r, t, h = 1.3, 0.7, 1e-5
        dp2 = (hy.heat_kernel(2, r + h, t) - hy.heat_kernel(2, r - h, t)) / (2.0 * h)
        descent = -math.exp(-2.0 * t) / (2.0 * math.pi) * dp2 / math.sinh(r)
        assert hy.heat_kernel(4, r, t) == pytest.approx(descent, rel=1e-8)

    def test_descent_relation_odd(self):
        r, t, h = 0.9, 0.4, 1e-5
        dp3 = (hy.heat_kernel(3, r + h, t) - hy.heat_kernel(3, r - h, t)) / (2.0 * h)
        descent = -math.exp(-3.0 * t) / (2.0 * math.pi) * dp3 / math.sinh(r)
        assert hy.heat_kernel(5, r, t) == pytest.approx(descent, rel=1e-8)

    def test_axis_extension_continuous(self):
        for n in (2, 3, 4, 5):
            near = hy.heat_kernel(n, 1e-4, 0.5)
            limit = hy.heat_kernel(n, 0.0, 0.5)
            assert near == pytest.approx(limit, rel=1e-4)

    def test_chapman_kolmogorov(self):
        for d in (0.0, 1.0, 2.0):
            assert hy.chapman_kolmogorov_residual(0.5, 0.5, d) <= 1e-6

    def test_positive(self):
        for n in (2, 3, 4, 5):
            t = np.array([0.05, 0.5, 5.0])
            for r in (0.0, 0.3, 2.0, 7.0):
                assert np.all(np.asarray(hy.heat_kernel(n, r, t)) > 0.0)

    def test_domain(self):
        with pytest.raises(ValueError):
            hy.heat_kernel(6, 1.0, 1.0)
        with pytest.raises(ValueError):
            hy.heat_kernel(3, 1.0, -1.0)


class TestEnvelope:
    def test_point_values(self):
        assert hy.dm_envelope(3, 0.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
        expected = math.exp(-0.25 - 0.25 - 0.5) * 3.0 ** -0.5 * 2.0
        assert hy.dm_envelope(2, 1.0, 1.0) == pytest.approx(expected, rel=1e-14)

    def test_monotone_decreasing_in_r(self):
        r = np.linspace(0.0, 8.0, 40)
        vals = np.asarray(hy.dm_envelope(3, r, 1.0))
        assert np.all(np.diff(vals) < 0.0)

    def test_ratio_scan_bounded(self):
        for n in (2, 3):
            lo, hi = hy.dm_ratio_scan(
                n, np.linspace(0.0, 10.0, 12), np.geomspace(0.01, 10.0, 12)
            )
            assert 0.0 < lo < hi < math.inf
            assert hi / lo <= 10.0

    def test_refinement_only_extends_range(self):
        coarse = hy.dm_ratio_scan(3, np.linspace(0, 6, 5), np.geomspace(0.1, 5, 5))
        fine = hy.dm_ratio_scan(3, np.linspace(0, 6, 9), np.geomspace(0.1, 5, 9))
        assert fine[0] <= coarse[0] + 1e-15 and fine[1] >= coarse[1] - 1e-15


class TestFracKernel:
    def test_two_routes_agree(self):
        for n in (3, 5):
            for s in (0.25, 0.5, 0.75):
                for r in (0.5, 1.0, 2.0, 4.0):
                    a = hy.frac_kernel(n, s, r, route="time_quadrature")
                    b = hy.frac_kernel(n, s, r, route="bessel_closed_form")
                    assert a == pytest.approx(b, rel=1e-7)

    def test_bessel_route_hand_formula_n3(self):
        s, r = 0.5, 1.0
        hand = (
            2.0 ** (s - 0.5)
            * math.pi ** -1.5
            / math.sinh(r)
            * r ** (-s - 0.5)
            * bessel_k(s + 1.5, r)
        )
        assert hy.frac_kernel(3, s, r, route="bessel_closed_form") == pytest.approx(
            hand, rel=1e-13
        )

    def test_positive_decreasing(self):
        rs = np.array([0.1, 0.5, 1.0, 2.0, 4.0, 8.0])
        vals = [hy.frac_kernel(3, 0.5, float(r)) for r in rs]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_small_r_power_stabilizes(self):
        n, s = 3, 0.5
        v2 = hy.frac_kernel(n, s, 1e-2) * 1e-2 ** (n + 2 * s)
        v3 = hy.frac_kernel(n, s, 1e-3) * 1e-3 ** (n + 2 * s)
        assert v2 > 0 and v3 > 0
        assert abs(v2 / v3 - 1.0) <= 0.03

    def test_route_dimension_mismatch(self):
        with pytest.raises(ValueError):
            hy.frac_kernel(2, 0.5, 1.0, route="bessel_closed_form")
        with pytest.raises(ValueError):
            hy.frac_kernel(3, 1.5, 1.0)


class TestLogKernels:
    def test_flat_space_closed_form(self):
        n, r = 3, 1.0
        k1, k2 = hy.log_kernels_flat(n, r)
        half = 0.5 * n
        k1_exact = math.pi ** -1.5 * upper_gamma(half, 0.25 * r * r)
        assert k1 == pytest.approx(k1_exact, abs=1e-10)
        from loglap.specfun import gamma

        k2_exact = math.pi ** -1.5 * (gamma(half) - upper_gamma(half, 0.25))
        assert k2 == pytest.approx(k2_exact, abs=1e-10)

    def test_positive_decreasing(self):
        rs = [0.2, 0.5, 1.0, 2.0, 4.0]
        for n in (2, 3):
            pairs = [hy.log_kernels(n, r) for r in rs]
            k1s = [p[0] for p in pairs]
            k2s = [p[1] for p in pairs]
            assert all(v > 0 for v in k1s + k2s)
            assert all(a > b for a, b in zip(k1s, k1s[1:]))
            assert all(a > b for a, b in zip(k2s, k2s[1:]))

    def test_vectorized_matches_adaptive(self):
        for n in (2, 3):
            for r in (0.3, 1.7):
                k1a, k2a = hy.log_kernels(n, r)
                k1f, k2f = hy.log_kernel_values(n, np.array([r]))
                assert k1f[0] == pytest.approx(k1a, rel=2e-8)
                assert k2f[0] == pytest.approx(k2a, rel=2e-8)

    def test_k2_large_r_rescaled_stabilization(self):
        # K2 * r * e^((n-1)r) approaches a constant; from r = 4 onward the
        # rescaled values sit within a factor 3 of each other (at r = 2 the
        # 1/r corrections still contribute a factor ~3.8)
        n = 3
        scaled = [
            hy.log_kernels(n, r)[1] * r * math.exp((n - 1) * r) for r in (4.0, 8.0)
        ]
        assert scaled[0] / scaled[1] <= 3.0 and scaled[1] / scaled[0] <= 3.0


class TestKernelTable:
    def test_invariants(self):
        with pytest.raises(ValueError):
            hy.KernelTable(3, 0.5, [1.0, 0.5], [1.0, 2.0], "time_quadrature")
        with pytest.raises(ValueError):
            hy.KernelTable(3, 0.5, [0.5, 1.0], [1.0, 2.0], "time_quadrature")

    def test_build_and_serialize(self, tmp_path):
        table = hy.build_kernel_table(
            3, "frac", np.linspace(0.5, 4.0, 8), s=0.5, route="bessel_closed_form"
        )
        csv_path = tmp_path / "table.csv"
        table.to_csv(csv_path)
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "r,value" and len(lines) == 9
        meta = json.loads((tmp_path / "table.csv.json").read_text())
        assert meta["n"] == 3 and meta["s"] == 0.5

    def test_worker_env_deterministic(self, tmp_path, monkeypatch):
        grid = np.linspace(0.5, 4.0, 8)
        monkeypatch.setenv("LOGLAP_WORKERS", "1")
        t1 = hy.build_kernel_table(3, "log2", grid)
        monkeypatch.setenv("LOGLAP_WORKERS", "4")
        t2 = hy.build_kernel_table(3, "log2", grid)
        assert np.array_equal(t1.values, t2.values)


class TestAsymptFit:
    def test_small_r_slope(self):
        table = hy.build_kernel_table(
            3, "frac", np.geomspace(0.01, 0.25, 8), s=0.5, cfg=REL_CFG
        )
        fit = hy.asympt_fit(table, "small_r", "power")
        assert fit.coefficients["log_r"] == pytest.approx(-4.0, rel=0.02)

    def test_k1_gaussian_coefficient(self):
        table = hy.build_kernel_table(
            3, "log1", np.linspace(5.0, 12.0, 10), cfg=REL_CFG
        )
        fit = hy.asympt_fit(table, "large_r", "gaussian_tail", (5.0, 12.0))
        assert fit.coefficients["r2"] == pytest.approx(-0.25, rel=0.02)

    def test_needs_enough_points(self):
        table = hy.build_kernel_table(
            3, "frac", np.geomspace(0.01, 0.2, 4), s=0.5, route="bessel_closed_form"
        )
        with pytest.raises(ValueError):
            hy.asympt_fit(table, "small_r", "power")

    def test_unknown_model(self):
        table = hy.build_kernel_table(
            3, "frac", np.geomspace(0.01, 0.2, 6), s=0.5, route="bessel_closed_form"
        )
        with pytest.raises(ValueError):
            hy.asympt_fit(table, "small_r", "cubic")


class TestPointwise:
    def test_zero_function(self):
        zero = hy.HyperRadialFunction("zero", lambda r: np.zeros_like(r), 1.0)
        assert hy.log_pointwise_h(3, zero, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_far_outside_support_negative(self):
        bump = hy.hyper_registry()["bump"]
        val = hy.log_pointwise_h(3, bump, 8.0)
        assert val < 0.0

    def test_matches_bochner_route(self):
        bump = hy.hyper_registry()["bump"]
        a = hy.log_pointwise_h(3, bump, 0.0)
        b = hy.log_bochner_h(3, bump, 0.0)
        assert a == pytest.approx(b, rel=1e-3)

    def test_split_identity(self):
        bump = hy.hyper_registry()["bump"]
        for xd in (0.0, 1.0):
            rep = hy.split_check(3, bump, xd)
            assert rep.identity_residual <= 1e-8 * (1.0 + abs(rep.direct))

    def test_split_zero_function(self):
        zero = hy.HyperRadialFunction("zero", lambda r: np.zeros_like(r), 1.0)
        rep = hy.split_check(3, zero, 0.0)
        assert rep.near == rep.far == 0.0
        assert rep.remainder == pytest.approx(0.0, abs=1e-15)
        assert rep.direct == pytest.approx(0.0, abs=1e-15)

    def test_tail_constant_finite(self):
        rep = hy.split_check(3, hy.hyper_registry()["bump"], 0.0)
        assert math.isfinite(rep.tail_constant)
        # rho_h = |S^2| int_1^inf K1 sinh^2 + Gamma'(1); the integral is
        # positive and Gamma'(1) = -gamma
        assert rep.tail_constant > -EULER_GAMMA


class TestKernelNorms:
    def test_lp_stabilization(self):
        for p in (1.5, 2.0):
            rep = hy.kernel_norms(3, p, [20.0, 30.0])
            a, b = rep.truncated_norms
            assert abs(b - a) / a <= 1e-6

    def test_l1_log_growth(self):
        rep = hy.kernel_norms(3, 1.0, [13.3, 20.0, 30.0])
        c1, c2 = rep.log_growth_rates
        assert abs(c2 / c1 - 1.0) <= 0.2

    def test_weighted_l1_positive(self):
        bump = hy.hyper_registry()["bump"]
        rep = hy.kernel_norms(3, 2.0, [10.0], f=bump)
        assert rep.weighted_l1 > 0.0

    def test_energy_inequality(self):
        bump = hy.hyper_registry()["bump"]
        rep = hy.kernel_norms(3, 2.0, [10.0], f=bump, energy_pq=(2.0, 1.0))
        assert rep.energy_lhs <= rep.energy_rhs

    def test_energy_exponent_validation(self):
        bump = hy.hyper_registry()["bump"]
        with pytest.raises(ValueError):
            hy.kernel_norms(3, 2.0, [10.0], f=bump, energy_pq=(2.0, 2.0))
