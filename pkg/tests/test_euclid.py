"""Euclidean routes: constants, grid multipliers, singular integrals, and
the heat-quadrature route, cross-checked against each other and against
closed-form Gaussian moments."""

import json
import math

import numpy as np
import pytest

from loglap import euclid as eu
from loglap.specfun import EULER_GAMMA, digamma, gamma


class TestConstants:
    def test_c2_is_inverse_pi(self):
        assert eu.constants(2).c_n == pytest.approx(1.0 / math.pi, rel=1e-14)

    def test_rho1_is_minus_two_gamma(self):
        assert eu.constants(1).rho_n == pytest.approx(-2.0 * EULER_GAMMA, abs=1e-14)

    def test_rho2(self):
        expected = 2.0 * math.log(2.0) - 2.0 * EULER_GAMMA
        assert eu.constants(2).rho_n == pytest.approx(expected, abs=1e-14)
        assert eu.constants(2).rho_n == pytest.approx(0.2319, abs=1e-4)

    def test_cn_equals_two_over_sphere_area(self):
        for n in range(1, 11):
            c = eu.constants(n)
            assert c.c_n == pytest.approx(2.0 / c.sphere_area, rel=1e-13)

    def test_domain(self):
        with pytest.raises(ValueError):
            eu.constants(0)
        with pytest.raises(ValueError):
            eu.constants(11)


class TestFracConstant:
    def test_formula_vs_bochner_quadrature(self):
        for n in (1, 2, 3):
            for s in (0.25, 0.5, 0.75):
                formula = eu.frac_constant(n, s).c_ns
                quad = eu.bochner_prefactor_numeric(n, s, r=1.0)
                assert quad == pytest.approx(formula, rel=1e-8)

    def test_r_independence(self):
        a = eu.bochner_prefactor_numeric(2, 0.5, r=0.7)
        b = eu.bochner_prefactor_numeric(2, 0.5, r=2.0)
        assert a == pytest.approx(b, rel=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            eu.frac_constant(2, 1.5)


class TestRegistry:
    def test_members_present(self):
        for n in (1, 2, 3):
            reg = eu.registry(n)
            assert set(reg) == {"gaussian", "bump", "plateau"}

    def test_supports(self):
        reg = eu.registry(2)
        assert math.isinf(reg["gaussian"].support_radius)
        assert reg["gaussian"].far_radius == 12.0
        assert reg["bump"].support_radius == 1.0
        rho = np.array([0.0, 0.5, 0.999, 1.0, 2.0])
        vals = reg["bump"].eval_radial(rho)
        assert vals[3] == 0.0 and vals[4] == 0.0 and vals[0] == pytest.approx(
            math.exp(-1.0)
        )

    def test_plateau_shape(self):
        reg = eu.registry(1)
        p = reg["plateau"]
        assert p.eval_radial(np.array([0.3]))[0] == 1.0
        assert p.eval_radial(np.array([1.0]))[0] == 0.0
        assert p.smoothness == "holder" and p.holder_beta == 1.0

    def test_rough_function_rejected(self):
        with pytest.raises(eu.SmoothnessTooLowError):
            eu.TestFunction("bad", 1, lambda r: r, 1.0, "holder", 0.0)


class TestPeriodicGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            eu.PeriodicGridFunction(1, 10.0, 7, np.zeros(7))  # odd N
        with pytest.raises(ValueError):
            eu.PeriodicGridFunction(1, 10.0, 8, np.full(8, np.nan))

    def test_heat_identity_limit(self):
        grid = eu.PeriodicGridFunction.from_function(
            eu.registry(1)["gaussian"], 1, 24.0, 256
        )
        out = eu.heat_apply(grid, 1e-12)
        assert np.max(np.abs(out.samples - grid.samples)) <= 1e-10

    def test_heat_preserves_constants(self):
        grid = eu.PeriodicGridFunction(1, 10.0, 64, np.full(64, 3.7))
        out = eu.heat_apply(grid, 2.0)
        assert np.max(np.abs(out.samples - 3.7)) <= 1e-13

    def test_heat_preserves_mean(self):
        grid = eu.PeriodicGridFunction.from_function(
            eu.registry(1)["bump"], 1, 24.0, 256
        )
        out = eu.heat_apply(grid, 0.7)
        assert out.mean() == pytest.approx(grid.mean(), abs=1e-15)

    def test_heat_eigenmode(self):
        length, points, t = 5.0, 128, 0.3
        x = -0.5 * length + np.arange(points) * (length / points)
        mode = np.cos(2.0 * math.pi * x / length)
        grid = eu.PeriodicGridFunction(1, length, points, mode)
        out = eu.heat_apply(grid, t)
        factor = math.exp(-t * (2.0 * math.pi / length) ** 2)
        assert np.max(np.abs(out.samples - factor * mode)) <= 1e-13

    def test_log_multiplier_unit_frequency_mode(self):
        # on a 2 pi torus the first mode has |xi| = 1 and log(1) = 0
        length, points = 2.0 * math.pi, 64
        x = -0.5 * length + np.arange(points) * (length / points)
        grid = eu.PeriodicGridFunction(1, length, points, np.cos(x))
        out = eu.log_multiplier(grid)
        assert np.max(np.abs(out.samples)) <= 1e-13

    def test_log_multiplier_kills_mean(self):
        grid = eu.PeriodicGridFunction(2, 10.0, 32, np.full((32, 32), 2.5))
        out = eu.log_multiplier(grid)
        assert np.max(np.abs(out.samples)) <= 1e-13

    def test_log_multiplier_eigenmode_exact(self):
        length, points = 24.0, 128
        x = -0.5 * length + np.arange(points) * (length / points)
        k = 5
        xi2 = (2.0 * math.pi * k / length) ** 2
        mode = np.sin(2.0 * math.pi * k * x / length)
        out = eu.log_multiplier(eu.PeriodicGridFunction(1, length, points, mode))
        assert np.max(np.abs(out.samples - math.log(xi2) * mode)) <= 1e-12

    def test_frac_multiplier_semigroup(self):
        grid = eu.PeriodicGridFunction.from_function(
            eu.registry(1)["bump"], 1, 24.0, 256
        )
        twice = eu.frac_multiplier(eu.frac_multiplier(grid, 0.5), 0.5)
        lap = eu.laplacian_multiplier(grid)
        assert np.max(np.abs(twice.samples + lap.samples)) <= 1e-10

    def test_frac_multiplier_domain(self):
        grid = eu.PeriodicGridFunction(1, 10.0, 16, np.zeros(16))
        with pytest.raises(ValueError):
            eu.frac_multiplier(grid, 1.2)

    def test_multiplier_linearity(self):
        rng = np.random.default_rng(4)
        f = rng.normal(size=64)
        g = rng.normal(size=64)
        ga = eu.PeriodicGridFunction(1, 10.0, 64, f)
        gb = eu.PeriodicGridFunction(1, 10.0, 64, g)
        gc = eu.PeriodicGridFunction(1, 10.0, 64, 2.0 * f - 3.0 * g)
        lhs = eu.log_multiplier(gc).samples
        rhs = 2.0 * eu.log_multiplier(ga).samples - 3.0 * eu.log_multiplier(gb).samples
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_csv_serialization(self, tmp_path):
        grid = eu.PeriodicGridFunction.from_function(
            eu.registry(2)["bump"], 2, 10.0, 8
        )
        csv_path = tmp_path / "grid.csv"
        grid.to_csv(csv_path)
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "x1,x2,value"
        assert len(lines) == 1 + 8 * 8
        meta = json.loads((tmp_path / "grid.csv.json").read_text())
        assert meta == {"n": 2, "L": 10.0, "N": 8}


class TestLogPointwise:
    def test_gaussian_chi_square_moment_n1(self):
        gauss = eu.registry(1)["gaussian"]
        target = digamma(0.5) + math.log(2.0)
        assert eu.log_pointwise(gauss, [0.0]) == pytest.approx(target, abs=1e-3)

    def test_gaussian_chi_square_moment_n2(self):
        gauss = eu.registry(2)["gaussian"]
        target = digamma(1.0) + math.log(2.0)
        assert eu.log_pointwise(gauss, [0.0, 0.0]) == pytest.approx(target, abs=1e-3)

    def test_outside_support_negative(self):
        bump = eu.registry(1)["bump"]
        val = eu.log_pointwise(bump, [2.5])
        # first and third terms vanish; what remains is minus a positive mass
        assert val < 0.0

    def test_linearity(self):
        reg = eu.registry(1)
        f, g = reg["bump"], reg["plateau"]
        combo = eu.TestFunction(
            "combo",
            1,
            lambda r: 2.0 * f.profile(r) - 0.5 * g.profile(r),
            1.0,
            "holder",
            1.0,
        )
        x = [0.25]
        lhs = eu.log_pointwise(combo, x)
        rhs = 2.0 * eu.log_pointwise(f, x) - 0.5 * eu.log_pointwise(g, x)
        assert lhs == pytest.approx(rhs, abs=1e-8)


class TestFracPointwise:
    def test_gaussian_moment(self):
        gauss = eu.registry(1)["gaussian"]
        assert eu.frac_pointwise(gauss, [0.0], 0.5) == pytest.approx(
            math.sqrt(2.0 / math.pi), abs=1e-3
        )

    def test_gaussian_moment_general(self):
        for n in (1, 2):
            gauss = eu.registry(n)["gaussian"]
            for s in (0.25, 0.75):
                target = 2.0 ** s * gamma(0.5 * n + s) / gamma(0.5 * n)
                val = eu.frac_pointwise(gauss, np.zeros(n), s)
                assert val == pytest.approx(target, abs=1e-3)

    def test_constant_extension_vanishes(self):
        # f identically 1 over the whole truncation region: the difference
        # integrand is zero and only the far boundary layer survives
        const = eu.TestFunction("const", 1, lambda r: np.ones_like(r), 60.0, "smooth")
        assert abs(eu.frac_pointwise(const, [0.0], 0.75)) <= 1e-3

    def test_domain(self):
        gauss = eu.registry(1)["gaussian"]
        with pytest.raises(ValueError):
            eu.frac_pointwise(gauss, [0.0], 1.5)


class TestBochnerRoutes:
    def test_zero_function(self):
        zero = eu.TestFunction("zero", 1, lambda r: np.zeros_like(r), 1.0, "smooth")
        assert eu.log_bochner_point(zero, [0.0]) == pytest.approx(0.0, abs=1e-12)
        assert eu.frac_bochner_point(zero, [0.0], 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_log_matches_pointwise_on_bump(self):
        bump = eu.registry(1)["bump"]
        a = eu.log_bochner_point(bump, [0.0])
        b = eu.log_pointwise(bump, [0.0])
        assert a == pytest.approx(b, abs=1e-4)

    def test_frac_matches_pointwise_on_bump(self):
        bump = eu.registry(1)["bump"]
        a = eu.frac_bochner_point(bump, [0.0], 0.5)
        b = eu.frac_pointwise(bump, [0.0], 0.5)
        assert a == pytest.approx(b, abs=1e-4)

    def test_gaussian_closed_forms(self):
        gauss = eu.registry(1)["gaussian"]
        assert eu.log_bochner_point(gauss, [0.0]) == pytest.approx(
            digamma(0.5) + math.log(2.0), abs=1e-3
        )
        assert eu.frac_bochner_point(gauss, [0.0], 0.5) == pytest.approx(
            math.sqrt(2.0 / math.pi), abs=1e-3
        )


class TestPeriodizationShift:
    """The torus multiplier equals pointwise + shift exactly; residuals here
    are pure quadrature/aliasing noise."""

    def test_log_identity_gaussian_n1(self):
        gauss = eu.registry(1)["gaussian"]
        grid = eu.PeriodicGridFunction.from_function(gauss, 1, 24.0, 512)
        vt = eu.log_multiplier(grid).value_at([0.0])
        vp = eu.log_pointwise(gauss, [0.0])
        shift = eu.log_periodization_shift(gauss, 24.0, [0.0])
        assert abs(vt - vp - shift) <= 1e-7

    def test_log_identity_bump_n1_offcenter(self):
        bump = eu.registry(1)["bump"]
        grid = eu.PeriodicGridFunction.from_function(bump, 1, 24.0, 2048)
        out = eu.log_multiplier(grid)
        for x1 in (0.0, 0.1875, -0.28125):
            vt = out.value_at([x1])
            vp = eu.log_pointwise(bump, [x1])
            shift = eu.log_periodization_shift(bump, 24.0, [x1])
            assert abs(vt - vp - shift) <= 1e-7

    def test_frac_identity_gaussian_n1(self):
        gauss = eu.registry(1)["gaussian"]
        grid = eu.PeriodicGridFunction.from_function(gauss, 1, 24.0, 512)
        for s in (0.25, 0.5):
            vt = eu.frac_multiplier(grid, s).value_at([0.0])
            vp = eu.frac_pointwise(gauss, [0.0], s)
            shift = eu.frac_periodization_shift(gauss, 24.0, [0.0], s)
            assert abs(vt - vp - shift) <= 5e-7

    def test_log_identity_n2(self):
        gauss = eu.registry(2)["gaussian"]
        grid = eu.PeriodicGridFunction.from_function(gauss, 2, 24.0, 256)
        vt = eu.log_multiplier(grid).value_at([0.0, 0.0])
        vp = eu.log_pointwise(gauss, [0.0, 0.0])
        shift = eu.log_periodization_shift(gauss, 24.0, [0.0, 0.0], images=6)
        assert abs(vt - vp - shift) <= 1e-6

    def test_geometry_guard(self):
        bump = eu.registry(1)["bump"]
        with pytest.raises(ValueError):
            eu.log_periodization_shift(bump, 3.0, [1.2])


class TestLimits:
    def test_e0_monotone_and_quotient(self):
        bump = eu.registry(1)["bump"]
        grid = eu.PeriodicGridFunction.from_function(bump, 1, 24.0, 512)
        mz = grid.with_samples(grid.samples - grid.mean())
        rep = eu.limits_report(mz, [0.2, 0.1, 0.05, 0.02])
        assert all(a > b for a, b in zip(rep.e0, rep.e0[1:]))
        qs = [q / s for q, s in zip(rep.quotient, rep.s_grid)]
        for a, b in zip(qs, qs[1:]):
            assert 1.0 / 3.0 <= b / a <= 3.0

    def test_s_to_one(self):
        bump = eu.registry(1)["bump"]
        grid = eu.PeriodicGridFunction.from_function(bump, 1, 24.0, 512)
        mz = grid.with_samples(grid.samples - grid.mean())
        rep = eu.limits_report(mz, [1e-4])
        assert rep.e1[0] <= 1e-3 * rep.laplacian_norm


class TestFlatKernels:
    def test_k1_plus_k2_total(self):
        # K1 + K2 integrates the full time axis: pi^(-n/2) Gamma(n/2) r^-n
        n, r = 3, 1.3
        total = eu.k1_flat(n, r) + eu.k2_flat(n, r)
        expected = math.pi ** -1.5 * gamma(1.5) * r ** -3.0
        assert total == pytest.approx(expected, rel=1e-12)

    def test_frac_kernel_flat(self):
        assert eu.frac_kernel_flat(1, 0.5, 2.0) == pytest.approx(
            eu.frac_constant(1, 0.5).c_ns * 2.0 ** -2.0, rel=1e-14
        )
