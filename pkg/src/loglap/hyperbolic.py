"""Heat, fractional, and logarithmic kernels on real hyperbolic space H^n.

Odd dimensions evaluate the heat kernel through an exact term algebra closed
under the radial operator D = (1/sinh r) d/dr acting on
t^p r^a coth^b(r) csch^c(r) exp(-m^2 t - r^2/4t); even dimensions evaluate
the singular integral formula after the substitution x = r + u^2, which
removes the (cosh x - cosh r)^(-1/2) endpoint exactly.

The fractional kernel comes either from time quadrature of the heat kernel
or, in dimensions 3 and 5, from a closed Bessel-function form obtained by
applying D to r^(-nu) K_nu(c r); the two routes are compared in the tests.
"""

from __future__ import annotations

import concurrent.futures
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import reporting
from .quadrature import (
    DEFAULT_CONFIG,
    NonConvergenceError,
    QuadratureConfig,
    integrate,
    integrate_semiinfinite,
)
from .specfun import EULER_GAMMA, bessel_k, gamma

__all__ = [
    "RadialTerm",
    "TermSum",
    "heat_term_sum",
    "heat_kernel",
    "dm_envelope",
    "dm_ratio_scan",
    "frac_kernel",
    "log_kernels",
    "log_kernel_values",
    "KernelTable",
    "build_kernel_table",
    "asympt_fit",
    "FitReport",
    "IllConditionedError",
    "HyperRadialFunction",
    "hyper_registry",
    "log_pointwise_h",
    "log_bochner_h",
    "split_check",
    "kernel_norms",
    "heat_mass",
    "chapman_kolmogorov_residual",
    "worker_count",
]


# ---------------------------------------------------------------------------
# term algebra for odd dimensions


@dataclass(frozen=True)
class RadialTerm:
    """coeff * t^t_pow * r^r_pow * coth^coth_pow * csch^csch_pow (* K factor).

    The shared exponential exp(-m^2 t - r^2/4t) (heat sums, gauss=True) or
    the Bessel base order and scale (kernel sums) live on the TermSum.
    bessel_shift indexes the factor r^-(nu+k) K_{nu+k}(c r).
    """

    coeff: Fraction | float
    t_pow: Fraction
    r_pow: int
    coth_pow: int
    csch_pow: int
    bessel_shift: int | None = None


@dataclass
class TermSum:
    terms: list[RadialTerm]
    m2: int = 0  # coefficient of -m^2 t in the exponent
    gauss: bool = True  # presence of exp(-r^2 / 4t)
    bessel_order: float | None = None  # base order nu
    bessel_scale: float | None = None  # argument scale c in K(c r)

    def _collect(self, terms):
        merged: dict[tuple, Fraction | float] = {}
        for t in terms:
            key = (t.t_pow, t.r_pow, t.coth_pow, t.csch_pow, t.bessel_shift)
            merged[key] = merged.get(key, 0) + t.coeff
        return [
            RadialTerm(c, *key[:4], bessel_shift=key[4])
            for key, c in merged.items()
            if c != 0
        ]

    def radial_derivative(self) -> "TermSum":
        """Apply D = (1/sinh r) d/dr; the family is closed under D."""
        out = []
        for t in self.terms:
            a, b, c = t.r_pow, t.coth_pow, t.csch_pow
            if a:
                out.append(
                    RadialTerm(t.coeff * a, t.t_pow, a - 1, b, c + 1, t.bessel_shift)
                )
            if b:
                out.append(
                    RadialTerm(-t.coeff * b, t.t_pow, a, b - 1, c + 3, t.bessel_shift)
                )
            if c:
                out.append(
                    RadialTerm(-t.coeff * c, t.t_pow, a, b + 1, c + 1, t.bessel_shift)
                )
            if self.gauss:
                out.append(
                    RadialTerm(
                        -t.coeff * Fraction(1, 2),
                        t.t_pow - 1,
                        a + 1,
                        b,
                        c + 1,
                        t.bessel_shift,
                    )
                )
            if t.bessel_shift is not None:
                # d/dr [r^-(nu+k) K_{nu+k}(c r)] = -c r^-(nu+k) K_{nu+k+1}(c r)
                out.append(
                    RadialTerm(
                        -t.coeff * self.bessel_scale,
                        t.t_pow,
                        a + 1,
                        b,
                        c + 1,
                        t.bessel_shift + 1,
                    )
                )
        return TermSum(
            self._collect(out), self.m2, self.gauss, self.bessel_order, self.bessel_scale
        )

    def evaluate(self, r, t=1.0) -> np.ndarray:
        """Evaluate at (r, t) with broadcasting; stable grouping of csch powers.

        r^a coth^b csch^c is evaluated as cosh^b (r/sinh r)^(b+c) r^(a-b-c),
        so only the explicit r powers can be negative; the singular orders
        cancel in the sum for every kernel this algebra produces.
        """
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        rcsch = np.where(r > 1e-8, r / np.sinh(np.maximum(r, 1e-300)), 1.0 / (1.0 + r * r / 6.0))
        cosh = np.cosh(r)
        total = np.zeros(np.broadcast(r, t).shape)
        for term in self.terms:
            a, b, c = term.r_pow, term.coth_pow, term.csch_pow
            val = (
                float(term.coeff)
                * t ** float(term.t_pow)
                * cosh ** b
                * rcsch ** (b + c)
                * r ** float(a - b - c)
            )
            if term.bessel_shift is not None:
                nu = self.bessel_order + term.bessel_shift
                cr = self.bessel_scale * r
                bk = np.array(
                    [bessel_k(nu, float(v)) for v in np.atleast_1d(cr)]
                ).reshape(np.shape(cr))
                val = val * r ** (-(self.bessel_order + term.bessel_shift)) * bk
            total = total + val
        if self.gauss:
            total = total * np.exp(-float(self.m2) * t - r * r / (4.0 * t))
        return total


_HEAT_SUMS: dict[int, TermSum] = {}


def heat_term_sum(n: int) -> TermSum:
    """D^m applied to exp(-m^2 t - r^2/4t) for odd n = 2m + 1."""
    if n % 2 == 0 or n < 1:
        raise ValueError(f"odd dimension required, got {n}")
    if n not in _HEAT_SUMS:
        m = (n - 1) // 2
        ts = TermSum([RadialTerm(Fraction(1), Fraction(0), 0, 0, 0)], m2=m * m)
        for _ in range(m):
            ts = ts.radial_derivative()
        _HEAT_SUMS[n] = ts
    return _HEAT_SUMS[n]


def _heat_odd(n: int, r, t) -> np.ndarray:
    m = (n - 1) // 2
    pref = (-1.0) ** m / (2.0 ** m * math.pi ** m)
    t = np.asarray(t, dtype=float)
    return pref * (4.0 * math.pi * t) ** -0.5 * heat_term_sum(n).evaluate(r, t)


# even dimensions: singular-integral formula with x = r + u^2

_EVEN_GL_N, _EVEN_GL_W = np.polynomial.legendre.leggauss(32)


def _even_u_nodes(umax: float, panels: int = 10):
    edges = umax * (np.linspace(0.0, 1.0, panels + 1) ** 1.5)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (_EVEN_GL_N + 1.0))
        weights.append(half * _EVEN_GL_W)
    return np.concatenate(nodes), np.concatenate(weights)


def _stable_u_over_sqrt_sinh(u: np.ndarray) -> np.ndarray:
    """u / sqrt(sinh(u^2/2)), a smooth even function of u."""
    w = 0.5 * u * u
    small = w < 1e-6
    ws = np.where(small, 0.0, w)
    out = np.where(
        small,
        math.sqrt(2.0) * (1.0 - w * w / 24.0),
        u / np.sqrt(np.where(small, 1.0, np.sinh(ws))),
    )
    return out


def _heat_even(n: int, r: float, t) -> np.ndarray:
    """Heat kernel for n in {2, 4} at scalar r, vector t."""
    m = (n - 2) // 2
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    pref = (-1.0) ** m / (2.0 ** (m + 2.5) * math.pi ** (m + 1.5))
    lam = (2 * m + 1) ** 2 / 4.0
    for i, ti in enumerate(t):
        umax = math.sqrt(max(-r + math.sqrt(r * r + 200.0 * ti), 1e-8)) + 0.7
        u, w = _even_u_nodes(umax)
        x = r + u * u
        base = _stable_u_over_sqrt_sinh(u) * np.exp(-x * x / (4.0 * ti))
        sh = np.sinh(r + 0.5 * u * u)
        if n == 2:
            vals = math.sqrt(2.0) * x * base / np.sqrt(sh)
        else:
            # one application of (1/sinh r) d/dr under the integral sign
            bracket = 1.0 - x * x / (2.0 * ti) - 0.5 * x / np.tanh(r + 0.5 * u * u)
            vals = (
                math.sqrt(2.0)
                * base
                / np.sqrt(sh)
                * bracket
                / math.sinh(r)
            )
        out[i] = pref * ti ** -1.5 * math.exp(-lam * ti) * float(w @ vals)
    return out


def heat_kernel(n: int, r: float, t) -> float | np.ndarray:
    """Heat kernel p_n(r, t) on H^n for n in {2, 3, 4, 5}.

    Accepts a scalar or array t at fixed r. Values at r below 0.02 use an
    even-quadratic extension from nearby anchors, avoiding the individually
    singular csch powers near the axis.
    """
    if n not in (2, 3, 4, 5):
        raise ValueError(f"dimension must be in 2..5, got {n}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("t must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    scalar = np.isscalar(t) or t_arr.ndim == 0

    def raw(rv: float, tv):
        if n % 2 == 1:
            return _heat_odd(n, rv, tv)
        return _heat_even(n, rv, tv)

    tmin = float(np.min(t_arr))
    anchor = max(1e-3, min(0.02, 0.1 * math.sqrt(tmin)))
    if r >= anchor:
        out = raw(r, t_arr)
    else:
        v1 = raw(anchor, t_arr)
        v2 = raw(2.0 * anchor, t_arr)
        p0 = (4.0 * v1 - v2) / 3.0
        p2 = (v1 - p0) / anchor ** 2
        out = p0 + p2 * r * r
    return float(out) if scalar and np.ndim(out) == 0 else (float(out[0]) if scalar else out)


def _heat_scaled(n: int, r: float, t) -> np.ndarray:
    """p_n(r, t) * exp(r^2/4t + (n-1)^2 t/4), free of extreme underflow.

    The scaling exactly cancels the shared Gaussian/spectral-gap exponential
    of both the kernel and the comparison envelope.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    tmin = float(np.min(t))
    anchor = max(1e-3, min(0.02, 0.1 * math.sqrt(tmin)))

    def raw(rv: float):
        if n % 2 == 1:
            m = (n - 1) // 2
            pref = (-1.0) ** m / (2.0 ** m * math.pi ** m)
            ts = heat_term_sum(n)
            bare = TermSum(ts.terms, m2=0, gauss=False)
            return pref * (4.0 * math.pi * t) ** -0.5 * bare.evaluate(rv, t)
        m = (n - 2) // 2
        pref = (-1.0) ** m / (2.0 ** (m + 2.5) * math.pi ** (m + 1.5))
        out = np.empty_like(t)
        for i, ti in enumerate(t):
            umax = math.sqrt(max(-rv + math.sqrt(rv * rv + 200.0 * ti), 1e-8)) + 0.7
            u, w = _even_u_nodes(umax)
            x = rv + u * u
            expo = np.exp(-(2.0 * rv * u * u + u ** 4) / (4.0 * ti))
            base = _stable_u_over_sqrt_sinh(u) * expo
            sh = np.sinh(rv + 0.5 * u * u)
            if n == 2:
                vals = math.sqrt(2.0) * x * base / np.sqrt(sh)
            else:
                bracket = 1.0 - x * x / (2.0 * ti) - 0.5 * x / np.tanh(rv + 0.5 * u * u)
                vals = math.sqrt(2.0) * base / np.sqrt(sh) * bracket / math.sinh(rv)
            out[i] = pref * ti ** -1.5 * float(w @ vals)
        return out

    if r >= anchor:
        return raw(r)
    v1, v2 = raw(anchor), raw(2.0 * anchor)
    p0 = (4.0 * v1 - v2) / 3.0
    return p0 + (v1 - p0) / anchor ** 2 * r * r


def dm_envelope(n: int, r, t) -> np.ndarray | float:
    """Two-sided comparison envelope for p_n(r, t), without normalization:

    t^(-n/2) exp(-(n-1)^2 t/4 - r^2/4t - (n-1) r/2) (1 + r + t)^((n-3)/2) (1 + r).
    """
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    val = (
        t ** (-0.5 * n)
        * np.exp(-((n - 1) ** 2) * t / 4.0 - r * r / (4.0 * t) - (n - 1) * r / 2.0)
        * (1.0 + r + t) ** (0.5 * (n - 3))
        * (1.0 + r)
    )
    return val if val.ndim else float(val)


def dm_ratio_scan(n: int, r_grid, t_grid) -> tuple[float, float]:
    """(min, max) of heat_kernel / dm_envelope over the grid.

    The shared exponential exp(-r^2/4t - (n-1)^2 t/4) is cancelled
    analytically, so the scan is underflow-free even deep in the tails.
    """
    t = np.asarray(t_grid, dtype=float)
    ratios = []
    for r in np.asarray(r_grid, dtype=float):
        p_scaled = _heat_scaled(n, float(r), t)
        env_scaled = (
            t ** (-0.5 * n)
            * math.exp(-(n - 1) * r / 2.0)
            * (1.0 + r + t) ** (0.5 * (n - 3))
            * (1.0 + r)
        )
        ratios.append(p_scaled / env_scaled)
    ratios = np.concatenate([np.atleast_1d(x) for x in ratios])
    if not np.all(np.isfinite(ratios)) or np.any(ratios <= 0):
        raise ValueError("ratio scan produced nonpositive or nonfinite values")
    return float(ratios.min()), float(ratios.max())


# ---------------------------------------------------------------------------
# fractional kernel


def _bessel_kernel_sum(n: int, s: float) -> TermSum:
    """D^m applied to r^-nu K_nu(c r), nu = s + 1/2, c = (n-1)/2, n odd."""
    m = (n - 1) // 2
    ts = TermSum(
        [RadialTerm(1.0, Fraction(0), 0, 0, 0, bessel_shift=0)],
        gauss=False,
        bessel_order=s + 0.5,
        bessel_scale=0.5 * (n - 1),
    )
    for _ in range(m):
        ts = ts.radial_derivative()
    return ts


def frac_kernel(
    n: int,
    s: float,
    r: float,
    route: str = "time_quadrature",
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Fractional kernel int_0^inf p_n(r, t) t^(-1-s) dt on H^n.

    route="time_quadrature" splits at t = 1 with the short-time substitution
    u = r^2/4t; route="bessel_closed_form" (n in {3, 5}) evaluates the exact
    Bessel-term form obtained by m applications of the radial operator.
    """
    if not (0.0 < s < 1.0):
        raise ValueError(f"s must lie in (0, 1), got {s}")
    if not (r > 0.0):
        raise ValueError(f"r must be positive, got {r}")
    if route == "bessel_closed_form":
        if n not in (3, 5):
            raise ValueError("closed Bessel form available for n in {3, 5} only")
        m = (n - 1) // 2
        pref = (-1.0) ** m * (n - 1.0) ** (s + 0.5) / (2.0 ** m * math.pi ** (0.5 * n))
        return pref * float(_bessel_kernel_sum(n, s).evaluate(np.array(r)))
    if route != "time_quadrature":
        raise ValueError(f"unknown route {route!r}")

    def short(u):
        u = np.asarray(u, dtype=float)
        return np.asarray(heat_kernel(n, r, r * r / (4.0 * u))) * u ** (s - 1.0)

    def long_time(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(heat_kernel(n, r, t)) * t ** (-1.0 - s)

    head = integrate_semiinfinite(short, 0.25 * r * r, cfg=cfg)
    tail = integrate_semiinfinite(long_time, 1.0, cfg=cfg)
    if not (head.converged and tail.converged):
        raise NonConvergenceError(f"frac_kernel(n={n}, s={s}, r={r})")
    return (4.0 / (r * r)) ** s * head.value + tail.value


# ---------------------------------------------------------------------------
# logarithmic kernels K1 (short time) and K2 (long time)


def log_kernels(
    n: int, r: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> tuple[float, float]:
    """(K1, K2) = (int_0^1, int_1^inf) of p_n(r, t) dt/t, adaptively."""
    if not (r > 0.0):
        raise ValueError(f"r must be positive, got {r}")

    def short(u):
        u = np.asarray(u, dtype=float)
        return np.asarray(heat_kernel(n, r, r * r / (4.0 * u))) / u

    def long_time(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(heat_kernel(n, r, t)) / t

    k1 = integrate_semiinfinite(short, 0.25 * r * r, cfg=cfg)
    k2 = integrate_semiinfinite(long_time, 1.0, cfg=cfg)
    if not (k1.converged and k2.converged):
        raise NonConvergenceError(f"log_kernels(n={n}, r={r})")
    return k1.value, k2.value


_K_GL_N, _K_GL_W = np.polynomial.legendre.leggauss(24)


def _fixed_panels(edges: np.ndarray):
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (_K_GL_N + 1.0))
        weights.append(half * _K_GL_W)
    return np.concatenate(nodes), np.concatenate(weights)


def log_kernel_values(n: int, r_values) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (K1, K2) over an array of radii via fixed composite rules.

    Used inside pointwise operators and norm integrals where the kernels are
    needed at many quadrature nodes; agrees with `log_kernels` to ~1e-8.
    """
    r_values = np.atleast_1d(np.asarray(r_values, dtype=float))
    k1 = np.empty_like(r_values)
    k2 = np.empty_like(r_values)
    for i, r in enumerate(r_values):
        a = 0.25 * r * r
        # K1: int_a^inf p(r, a/u) du/u, integrand decays like e^-u
        edges = a + np.array([0.0, 1.0, 3.0, 7.0, 14.0, 26.0, 45.0, 75.0])
        u, w = _fixed_panels(edges)
        k1[i] = float(w @ (np.asarray(heat_kernel(n, float(r), a / u)) / u))
        # K2: int_1^inf p/t dt with w = 1/t
        edges2 = np.linspace(1e-9, 1.0, 9)
        v, wv = _fixed_panels(edges2)
        k2[i] = float(wv @ (np.asarray(heat_kernel(n, float(r), 1.0 / v)) / v))
    return k1, k2


def log_kernels_flat(n: int, r: float) -> tuple[float, float]:
    """Same split integrals with the Euclidean Gaussian kernel (sanity path).

    Closed forms: K1 = pi^(-n/2) r^-n Gamma(n/2, r^2/4) and
    K2 = pi^(-n/2) r^-n (Gamma(n/2) - Gamma(n/2, r^2/4)).
    """

    def short(u):
        u = np.asarray(u, dtype=float)
        tt = r * r / (4.0 * u)
        return (4.0 * math.pi * tt) ** (-0.5 * n) * np.exp(-u) / u

    def long_time(t):
        t = np.asarray(t, dtype=float)
        return (4.0 * math.pi * t) ** (-0.5 * n) * np.exp(-r * r / (4.0 * t)) / t

    k1 = integrate_semiinfinite(short, 0.25 * r * r).value
    k2 = integrate_semiinfinite(long_time, 1.0).value
    return k1, k2


# ---------------------------------------------------------------------------
# kernel tables, parallel build, asymptotic fits


def worker_count() -> int:
    env = os.environ.get("LOGLAP_WORKERS", "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class KernelTable:
    n: int
    parameter: float | None
    r_grid: np.ndarray
    values: np.ndarray
    route: str
    cfg: QuadratureConfig = DEFAULT_CONFIG

    def __post_init__(self):
        self.r_grid = np.asarray(self.r_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if np.any(np.diff(self.r_grid) <= 0):
            raise ValueError("r_grid must be strictly increasing")
        if np.any(self.values <= 0):
            raise ValueError("kernel values must be positive")
        if np.any(np.diff(self.values) >= 0):
            raise ValueError("kernel values must be strictly decreasing in r")

    def to_csv(self, csv_path, json_path=None) -> None:
        reporting.write_csv(csv_path, ["r", "value"], zip(self.r_grid, self.values))
        if json_path is None:
            json_path = str(csv_path) + ".json"
        payload = {
            "n": self.n,
            "route": self.route,
            "abs_tol": self.cfg.abs_tol,
            "rel_tol": self.cfg.rel_tol,
        }
        if self.parameter is not None:
            payload["s"] = self.parameter
        reporting.write_json(json_path, payload)


def build_kernel_table(
    n: int,
    kind: str,
    r_grid,
    s: float | None = None,
    t: float | None = None,
    route: str = "time_quadrature",
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> KernelTable:
    """Tabulate a radial kernel over r_grid, parallel over rows.

    kind: "frac" (needs s), "log1"/"log2", or "heat" (needs t). Row count
    workers come from LOGLAP_WORKERS (default: cpu count); the output is
    identical for any worker count.
    """
    r_grid = np.asarray(r_grid, dtype=float)

    def one(r: float) -> float:
        if kind == "frac":
            return frac_kernel(n, s, r, route=route, cfg=cfg)
        if kind == "log1":
            return log_kernels(n, r, cfg=cfg)[0]
        if kind == "log2":
            return log_kernels(n, r, cfg=cfg)[1]
        if kind == "heat":
            return float(heat_kernel(n, r, t))
        raise ValueError(f"unknown kernel kind {kind!r}")

    nw = worker_count()
    if nw == 1 or len(r_grid) < 4:
        values = [one(float(r)) for r in r_grid]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=nw) as ex:
            values = list(ex.map(one, [float(r) for r in r_grid]))
    parameter = s if kind == "frac" else t if kind == "heat" else None
    table_route = route if kind == "frac" else "time_quadrature"
    return KernelTable(n, parameter, r_grid, np.array(values), table_route, cfg)


class IllConditionedError(ValueError):
    """Regression design matrix is rank deficient."""


@dataclass
class FitReport:
    regime: str
    model: str
    coefficients: dict[str, float]
    residual_rms: float

    def as_dict(self) -> dict:
        return {
            "regime": self.regime,
            "model": self.model,
            "coefficients": self.coefficients,
            "residual": self.residual_rms,
        }


_MODEL_COLUMNS = {
    "power": ("const", "log_r"),
    "power_exp": ("const", "log_r", "r"),
    "gaussian_tail": ("const", "log_r", "r", "r2"),
}


def asympt_fit(
    table: KernelTable,
    regime: str,
    model: str,
    window: tuple[float, float] | None = None,
) -> FitReport:
    """Least-squares fit of log(value) against the model columns.

    regime selects the default window (small_r: r <= 0.3, large_r: r >= 3);
    an explicit (lo, hi) window overrides it. Requires >= 6 points.
    """
    if model not in _MODEL_COLUMNS:
        raise ValueError(f"unknown model {model!r}")
    if window is None:
        window = (0.0, 0.3) if regime == "small_r" else (3.0, math.inf)
    mask = (table.r_grid >= window[0]) & (table.r_grid <= window[1])
    r = table.r_grid[mask]
    v = table.values[mask]
    if r.size < 6:
        raise ValueError(f"need >= 6 points in the {regime} window, have {r.size}")
    cols = {"const": np.ones_like(r), "log_r": np.log(r), "r": r, "r2": r * r}
    names = _MODEL_COLUMNS[model]
    design = np.stack([cols[c] for c in names], axis=1)
    y = np.log(v)
    sol, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise IllConditionedError(f"rank {rank} < {design.shape[1]} columns")
    resid = y - design @ sol
    coeffs = {name: float(c) for name, c in zip(names, sol)}
    return FitReport(regime, model, coeffs, float(np.sqrt(np.mean(resid ** 2))))


# ---------------------------------------------------------------------------
# radial functions, pointwise logarithmic Laplacian, split identity


@dataclass(frozen=True)
class HyperRadialFunction:
    """Radial profile supported in a geodesic ball of radius support_radius."""

    id: str
    profile: Callable[[np.ndarray], np.ndarray]
    support_radius: float
    smoothness: str = "smooth"  # "smooth" | "holder"
    holder_alpha: float | None = None

    def __post_init__(self):
        if self.smoothness == "holder" and not (
            self.holder_alpha and self.holder_alpha > 0
        ):
            raise ValueError("holder class requires a positive exponent")


def _hyper_bump(rho):
    rho = np.asarray(rho, dtype=float)
    out = np.zeros_like(rho)
    inside = rho < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - rho[inside] ** 2))
    return out


def hyper_registry() -> dict[str, HyperRadialFunction]:
    return {
        "bump": HyperRadialFunction("bump", _hyper_bump, 1.0, "smooth"),
        "tent": HyperRadialFunction(
            "tent",
            lambda rho: np.maximum(0.0, 1.0 - np.asarray(rho, dtype=float)),
            1.0,
            "holder",
            1.0,
        ),
    }


_ANG_U, _ANG_W = np.polynomial.legendre.leggauss(64)
_ANG_THETA_2D = math.pi * (np.arange(128) + 0.5) / 128.0


def _geodesic_average(
    f: HyperRadialFunction, n: int, x_dist: float, r: np.ndarray
) -> np.ndarray:
    """Average of f over the geodesic sphere of radius r about a point at
    distance x_dist from the symmetry center of f.

    cosh d = cosh(x_dist) cosh(r) - sinh(x_dist) sinh(r) cos(theta).
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if x_dist == 0.0:
        return f.profile(r)
    ch, sh = math.cosh(x_dist), math.sinh(x_dist)
    if n == 2:
        cos_t = np.cos(_ANG_THETA_2D)
        w = np.full(cos_t.shape, 1.0 / cos_t.size)
    elif n == 3:
        cos_t = _ANG_U
        w = _ANG_W / 2.0
    else:
        raise ValueError("geodesic averages implemented for n in {2, 3}")
    arg = ch * np.cosh(r)[:, None] - sh * np.sinh(r)[:, None] * cos_t[None, :]
    d = np.arccosh(np.maximum(arg, 1.0))
    return f.profile(d) @ w


def _sphere_area_h(n: int) -> float:
    return 2.0 * math.pi ** (0.5 * n) / gamma(0.5 * n)


_R_INFINITY = 16.0  # K1 * volume growth is ~ e^(-r^2/4 + (n-1)r/2): dead by 16

POINTWISE_H_CFG = QuadratureConfig(abs_tol=1e-10, rel_tol=1e-8, max_subdivisions=500)


def _k1_tail_constant(n: int) -> float:
    """rho_n^H = |S^(n-1)| int_1^inf K1(r) sinh^(n-1) r dr + Gamma'(1)."""
    area = _sphere_area_h(n)

    def g(r):
        k1, _ = log_kernel_values(n, r)
        return k1 * np.sinh(r) ** (n - 1)

    res = integrate(g, 1.0, _R_INFINITY, cfg=POINTWISE_H_CFG)
    return area * res.value - EULER_GAMMA


def log_pointwise_h(
    n: int,
    f: HyperRadialFunction,
    x_dist: float,
    cfg: QuadratureConfig = POINTWISE_H_CFG,
) -> float:
    """Pointwise logarithmic Laplacian on H^n at geodesic distance x_dist
    from the center of the radial function f:

    int K1(d)(f(x) - f(y)) dvol - int K2(d) f(y) dvol + Gamma'(1) f(x).
    """
    if f.smoothness == "holder" and (f.holder_alpha or 0) <= 0:
        raise ValueError("f must be smooth or positively Holder continuous")
    if x_dist < 0:
        raise ValueError("x_dist must be nonnegative")
    area = _sphere_area_h(n)
    fx = float(f.profile(np.array([x_dist]))[0])
    if x_dist > f.support_radius + 0.5:
        # support is disjoint from the unit ball around x: the value reduces
        # to -int (K1 + K2)(d(x, y)) f(y) dvol, integrated around the center
        # of f where the support subtends order-one angles
        def far_form(rho):
            rho = np.atleast_1d(np.asarray(rho, dtype=float))
            ch, sh = math.cosh(x_dist), math.sinh(x_dist)
            if n == 3:
                cos_t, w = _ANG_U, _ANG_W / 2.0
            else:
                cos_t = np.cos(_ANG_THETA_2D)
                w = np.full(cos_t.shape, 1.0 / cos_t.size)
            arg = ch * np.cosh(rho)[:, None] - sh * np.sinh(rho)[:, None] * cos_t[None, :]
            d = np.arccosh(np.maximum(arg, 1.0))
            k1, k2 = log_kernel_values(n, d.ravel())
            ksum = ((k1 + k2).reshape(d.shape)) @ w
            return f.profile(rho) * ksum * np.sinh(rho) ** (n - 1)

        return -area * integrate(far_form, 0.0, f.support_radius, cfg=cfg).value
    r_active = x_dist + f.support_radius

    def core(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        k1, k2 = log_kernel_values(n, r)
        avg = _geodesic_average(f, n, x_dist, r)
        return (k1 * (fx - avg) - k2 * avg) * np.sinh(r) ** (n - 1)

    def k1_only(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        k1, _ = log_kernel_values(n, r)
        return k1 * np.sinh(r) ** (n - 1)

    value = area * integrate(core, 0.0, r_active, cfg=cfg).value
    if fx != 0.0:
        value += fx * area * integrate(k1_only, r_active, _R_INFINITY, cfg=cfg).value
    return value - EULER_GAMMA * fx


def log_bochner_h(
    n: int,
    f: HyperRadialFunction,
    x_dist: float,
    cfg: QuadratureConfig = POINTWISE_H_CFG,
) -> float:
    """Independent time-quadrature route: int (e^-t f(x) - P_t f(x)) / t dt."""
    area = _sphere_area_h(n)
    fx = float(f.profile(np.array([x_dist]))[0])
    r_active = x_dist + f.support_radius

    def deficit(t: float) -> float:
        # f(x) - P_t f(x) = int p(r, t) (f(x) - avg f) dvol by mass 1
        rmax = min(max(r_active + 2.0, 14.0 * math.sqrt(t) + (n - 1) * t), 60.0)

        def g(r):
            r = np.atleast_1d(np.asarray(r, dtype=float))
            avg = _geodesic_average(f, n, x_dist, r)
            p = np.array(
                [heat_kernel(n, float(rv), t) for rv in r]
            )
            return p * (fx - avg) * np.sinh(r) ** (n - 1)

        return area * integrate(g, 0.0, rmax, cfg=cfg).value

    def value_at(t: float) -> float:
        def g(r):
            r = np.atleast_1d(np.asarray(r, dtype=float))
            avg = _geodesic_average(f, n, x_dist, r)
            p = np.array([heat_kernel(n, float(rv), t) for rv in r])
            return p * avg * np.sinh(r) ** (n - 1)

        return area * integrate(g, 0.0, r_active, cfg=cfg).value

    def head(t: float) -> float:
        return (math.expm1(-t) * fx + deficit(t)) / t

    def tail(t: float) -> float:
        return (math.exp(-t) * fx - value_at(t)) / t

    def vec(fn):
        return lambda arr: np.array([fn(float(v)) for v in np.atleast_1d(arr)])

    head_part = integrate(vec(head), 0.0, 1.0, cfg=cfg)
    tail_part = integrate_semiinfinite(vec(tail), 1.0, cfg=cfg)
    return head_part.value + tail_part.value


@dataclass
class SplitReport:
    near: float
    far: float
    remainder: float
    tail_constant: float
    total: float
    direct: float

    @property
    def identity_residual(self) -> float:
        return abs(self.near + self.far + self.remainder - self.direct)


def split_check(
    n: int,
    f: HyperRadialFunction,
    x_dist: float,
    cfg: QuadratureConfig = POINTWISE_H_CFG,
) -> SplitReport:
    """Near/far/remainder decomposition of the pointwise value.

    near = int_{B_1} K1 (f(x) - f(y)), far = -int_{complement} K2 f(y) and
    the remainder collects -int_{B_1} K2 f, -int_{complement} K1 f and the
    tail constant rho_n^H f(x); their sum must reproduce the direct value.
    """
    area = _sphere_area_h(n)
    fx = float(f.profile(np.array([x_dist]))[0])
    r_active = x_dist + f.support_radius

    def piece(r, which: str):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        k1, k2 = log_kernel_values(n, r)
        avg = _geodesic_average(f, n, x_dist, r)
        vol = np.sinh(r) ** (n - 1)
        if which == "near":
            return k1 * (fx - avg) * vol
        if which == "k2_inner":
            return k2 * avg * vol
        if which == "k2_outer":
            return k2 * avg * vol
        if which == "k1_outer":
            return k1 * avg * vol
        raise ValueError(which)

    near = area * integrate(lambda r: piece(r, "near"), 0.0, 1.0, cfg=cfg).value
    far = 0.0
    k1_outer = 0.0
    if r_active > 1.0:
        far = -area * integrate(
            lambda r: piece(r, "k2_outer"), 1.0, r_active, cfg=cfg
        ).value
        k1_outer = area * integrate(
            lambda r: piece(r, "k1_outer"), 1.0, r_active, cfg=cfg
        ).value
    k2_inner = area * integrate(
        lambda r: piece(r, "k2_inner"), 0.0, min(1.0, r_active), cfg=cfg
    ).value
    rho_h = _k1_tail_constant(n)
    remainder = -k2_inner - k1_outer + rho_h * fx
    direct = log_pointwise_h(n, f, x_dist, cfg=cfg)
    return SplitReport(near, far, remainder, rho_h, near + far + remainder, direct)


def heat_mass(n: int, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Total heat-kernel mass |S^(n-1)| int p_n(r, t) sinh^(n-1) r dr."""
    area = _sphere_area_h(n)
    rmax = (n - 1) * t + 14.0 * math.sqrt(t) + 12.0

    def g(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        p = np.array([heat_kernel(n, float(rv), t) for rv in r])
        return p * np.sinh(r) ** (n - 1)

    return area * integrate(g, 0.0, rmax, cfg=cfg).value


def chapman_kolmogorov_residual(t: float, s: float, dist: float) -> float:
    """|int p_t(x, y) p_s(y, z) dvol(y) - p_{t+s}(d(x,z))| on H^3."""
    n = 3
    rr, wr = _fixed_panels(np.linspace(0.0, 14.0, 29))
    p_t = np.array([heat_kernel(n, float(r), t) for r in rr])
    ch, sh = math.cosh(dist), math.sinh(dist)
    arg = ch * np.cosh(rr)[:, None] - sh * np.sinh(rr)[:, None] * _ANG_U[None, :]
    d = np.arccosh(np.maximum(arg, 1.0))
    p_s = np.empty_like(d)
    flat = d.ravel()
    p_s = np.array([heat_kernel(n, float(v), s) for v in flat]).reshape(d.shape)
    inner = p_s @ (_ANG_W / 2.0)
    total = 2.0 * math.pi * 2.0 * float(
        (wr * p_t * np.sinh(rr) ** 2) @ inner
    )
    return abs(total - heat_kernel(n, dist, t + s))


# ---------------------------------------------------------------------------
# kernel norms, weighted integrability, energy inequality


@dataclass
class KernelNormReport:
    p: float
    radii: list[float]
    truncated_norms: list[float]
    log_growth_rates: list[float]
    weighted_l1: float | None = None
    energy_lhs: float | None = None
    energy_rhs: float | None = None


def kernel_norms(
    n: int,
    p: float,
    r_trunc_list,
    f: HyperRadialFunction | None = None,
    energy_pq: tuple[float, float] | None = None,
    cfg: QuadratureConfig = POINTWISE_H_CFG,
) -> KernelNormReport:
    """Truncated L^p norms of K2, the weighted-L1 functional, and both sides
    of the remainder energy inequality for a supplied f.

    For p > 1 the truncated norms stabilize; for p = 1 successive increments
    grow like c log(R_{i+1}/R_i). energy_pq = (p, q) must satisfy
    1/q + 2/p = 2.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    radii = [float(r) for r in r_trunc_list]
    if sorted(radii) != radii:
        raise ValueError("truncation radii must increase")
    area = _sphere_area_h(n)

    def k2_pow(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        _, k2 = log_kernel_values(n, r)
        return k2 ** p * np.sinh(r) ** (n - 1)

    norms = []
    acc = 0.0
    prev = 0.0
    for rt in radii:
        acc += integrate(k2_pow, prev, rt, cfg=cfg).value
        prev = rt
        norms.append((area * acc) ** (1.0 / p))
    rates = []
    for i in range(1, len(radii)):
        inc = norms[i] ** p - norms[i - 1] ** p if p == 1.0 else 0.0
        if p == 1.0:
            rates.append(inc / math.log(radii[i] / radii[i - 1]))
    report = KernelNormReport(p, radii, norms, rates)
    if f is not None:
        def weighted(r):
            r = np.atleast_1d(np.asarray(r, dtype=float))
            return (
                np.abs(f.profile(r))
                * np.exp(-(n - 1) * r)
                / (1.0 + r)
                * np.sinh(r) ** (n - 1)
            )

        report.weighted_l1 = area * integrate(
            weighted, 0.0, f.support_radius, cfg=cfg
        ).value
    if f is not None and energy_pq is not None:
        pe, qe = energy_pq
        if abs(1.0 / qe + 2.0 / pe - 2.0) > 1e-12:
            raise ValueError("energy exponents must satisfy 1/q + 2/p = 2")
        report.energy_lhs, report.energy_rhs = _energy_inequality(
            n, f, pe, qe, cfg
        )
    return report


def _lp_norm_radial(f: HyperRadialFunction, n: int, p: float) -> float:
    area = _sphere_area_h(n)
    res = integrate(
        lambda r: np.abs(f.profile(np.atleast_1d(r))) ** p
        * np.sinh(np.atleast_1d(r)) ** (n - 1),
        0.0,
        f.support_radius,
    )
    return (area * res.value) ** (1.0 / p)


def _energy_inequality(
    n: int, f: HyperRadialFunction, p: float, q: float, cfg: QuadratureConfig
) -> tuple[float, float]:
    """LHS = int |R_n(f; x)| |f(x)| dvol against the Young-type bound."""
    area = _sphere_area_h(n)
    rho_h = _k1_tail_constant(n)
    # |remainder(x)| |f(x)| is smooth on the support; a short Gauss rule
    # suffices and each node costs a full split evaluation
    gx, gw = np.polynomial.legendre.leggauss(10)
    xs = 0.5 * f.support_radius * (gx + 1.0)
    ws = 0.5 * f.support_radius * gw
    lhs_vals = []
    for xd in xs:
        rep = split_check(n, f, float(xd), cfg=cfg)
        lhs_vals.append(abs(rep.remainder))
    fx = np.abs(f.profile(xs))
    lhs = area * float(ws @ (np.array(lhs_vals) * fx * np.sinh(xs) ** (n - 1)))

    def k2_ball(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        _, k2 = log_kernel_values(n, r)
        return k2 ** q * np.sinh(r) ** (n - 1)

    def k1_outside(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        k1, _ = log_kernel_values(n, r)
        return k1 ** q * np.sinh(r) ** (n - 1)

    k2_q = (area * integrate(k2_ball, 0.0, 1.0, cfg=cfg).value) ** (1.0 / q)
    k1_q = (area * integrate(k1_outside, 1.0, _R_INFINITY, cfg=cfg).value) ** (
        1.0 / q
    )
    fp = _lp_norm_radial(f, n, p)
    f2 = _lp_norm_radial(f, n, 2.0)
    rhs = k2_q * fp ** 2 + k1_q * fp ** 2 + abs(rho_h) * f2 ** 2
    return lhs, rhs
