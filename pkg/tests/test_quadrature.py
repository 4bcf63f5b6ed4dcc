"""Quadrature engine contracts and the scalar integral identities."""

import math

import numpy as np
import pytest

from loglap import quadrature as q
from loglap.specfun import EULER_GAMMA, exp_integral_e1


class TestConfigs:
    def test_defaults(self):
        cfg = q.QuadratureConfig()
        assert cfg.abs_tol == 1e-12 and cfg.rel_tol == 1e-10
        assert cfg.max_subdivisions == 2000 and cfg.split_time == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            q.QuadratureConfig(abs_tol=0.0)
        with pytest.raises(ValueError):
            q.QuadratureConfig(max_subdivisions=0)
        with pytest.raises(ValueError):
            q.QuadratureConfig(split_time=-1.0)

    def test_result_invariants(self):
        with pytest.raises(ValueError):
            q.QuadResult(1.0, -1.0, 15)
        with pytest.raises(ValueError):
            q.QuadResult(1.0, 0.0, 0)

    def test_hint_validation(self):
        with pytest.raises(ValueError):
            q.SingularityHint("lower", "none")
        with pytest.raises(ValueError):
            q.SingularityHint("none", "log")
        with pytest.raises(ValueError):
            q.SingularityHint("middle", "log")


class TestIntegrate:
    def test_constant(self):
        res = q.integrate(lambda x: np.ones_like(x), 0.0, 1.0)
        assert res.value == pytest.approx(1.0, abs=1e-13)
        assert res.converged and res.evaluations >= 15

    def test_sin(self):
        res = q.integrate(np.sin, 0.0, math.pi)
        assert res.value == pytest.approx(2.0, abs=1e-12)

    def test_inverse_sqrt_hint(self):
        res = q.integrate(
            lambda x: 1.0 / np.sqrt(x),
            0.0,
            1.0,
            hint=q.SingularityHint("lower", "inverse_sqrt"),
        )
        assert res.value == pytest.approx(2.0, abs=1e-12)

    def test_upper_hint(self):
        res = q.integrate(
            lambda x: 1.0 / np.sqrt(1.0 - x),
            0.0,
            1.0,
            hint=q.SingularityHint("upper", "inverse_sqrt"),
        )
        assert res.value == pytest.approx(2.0, abs=1e-12)

    def test_hint_consistent_on_smooth(self):
        plain = q.integrate(np.cos, 0.0, 1.0).value
        hinted = q.integrate(
            np.cos, 0.0, 1.0, hint=q.SingularityHint("lower", "inverse_sqrt")
        ).value
        assert abs(plain - hinted) <= 1e-12

    def test_nonfinite_error(self):
        def pole(x):
            with np.errstate(divide="ignore"):
                return 1.0 / (x - 0.5)

        with pytest.raises(q.NonFiniteIntegrandError):
            q.integrate(pole, 0.0, 1.0)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            q.integrate(np.sin, 1.0, 0.0)

    def test_budget_exhaustion_flags(self):
        cfg = q.QuadratureConfig(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=2)
        res = q.integrate(lambda x: np.exp(np.sin(7.0 * x)), 0.0, 6.0, cfg=cfg)
        assert not res.converged
        assert math.isfinite(res.value)


class TestSemiInfinite:
    def test_exponential(self):
        res = q.integrate_semiinfinite(lambda t: np.exp(-t), 0.0)
        assert res.value == pytest.approx(1.0, abs=1e-12)

    def test_gamma_five_halves(self):
        res = q.integrate_semiinfinite(lambda t: t ** 1.5 * np.exp(-t), 0.0)
        assert res.value == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-11)

    def test_exponential_integral_cross_module(self):
        res = q.integrate_semiinfinite(lambda t: np.exp(-t) / t, 1.0)
        assert res.value == pytest.approx(exp_integral_e1(1.0), abs=1e-11)

    def test_gaussian_tail(self):
        res = q.integrate_semiinfinite(lambda t: np.exp(-t * t), 0.0)
        assert res.value == pytest.approx(0.5 * math.sqrt(math.pi), rel=1e-11)


class TestFrullani:
    def test_unity(self):
        assert q.frullani_log(1.0) == 0.0

    def test_log_two(self):
        assert q.frullani_log(2.0) == pytest.approx(math.log(2.0), abs=1e-10)

    def test_small_lambda(self):
        assert q.frullani_log(1e-3) == pytest.approx(math.log(1e-3), abs=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            q.frullani_log(0.0)
        with pytest.raises(ValueError):
            q.frullani_log(-2.0)

    def test_additivity(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            a = float(rng.uniform(0.05, 20.0))
            b = float(rng.uniform(0.05, 20.0))
            lhs = q.frullani_log(a * b)
            rhs = q.frullani_log(a) + q.frullani_log(b)
            assert abs(lhs - rhs) <= 2e-10

    def test_inversion_antisymmetry(self):
        for lam in (0.2, 3.0, 40.0):
            assert q.frullani_log(1.0 / lam) == pytest.approx(
                -q.frullani_log(lam), abs=2e-10
            )

    def test_split_time_insensitivity(self):
        for split in (0.25, 1.0, 4.0):
            cfg = q.QuadratureConfig(split_time=split)
            assert q.frullani_log(7.5, cfg) == pytest.approx(math.log(7.5), abs=1e-10)


class TestScalarIdentities:
    def test_report_passes(self):
        rep = q.verify_scalar_identities([1, 2, 3, 4, 5, 6])
        assert rep.passed, [c.as_dict() for c in rep.checks if not c.passed]

    def test_euler_identity_residual(self):
        rep = q.verify_scalar_identities([2])
        euler = next(c for c in rep.checks if c.id == "euler-identity")
        assert euler.measured <= 1e-10

    def test_log_moment_value_n2(self):
        # right side at n=2 is -gamma/2 + log 2
        expected = -0.5 * EULER_GAMMA + math.log(2.0)
        assert expected == pytest.approx(0.4045393, abs=1e-7)

    def test_gamma_tail_point(self):
        lo, val, hi = q.gamma_tail_bounds(3, 0.5, 6.0)
        assert lo <= val <= hi

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            q.verify_scalar_identities([])
