"""Fractional and logarithmic Laplacians via independent numerical routes.

Spectral multipliers on periodic grids, pointwise singular-integral kernels
with explicit constants, and heat-semigroup time quadrature, on Euclidean
space, real hyperbolic space, and discrete eigenbasis models — with a
verification suite that cross-checks every route, constant, and asymptotic
estimate the library advertises.
"""

from . import euclid, hyperbolic, quadrature, specfun, spectral
from .quadrature import (
    QuadResult,
    QuadratureConfig,
    SingularityHint,
    frullani_log,
    integrate,
    integrate_semiinfinite,
)
from .reporting import VerifyReport
from .verification import run_suite

__version__ = "0.1.0"

__all__ = [
    "specfun",
    "quadrature",
    "euclid",
    "hyperbolic",
    "spectral",
    "QuadratureConfig",
    "QuadResult",
    "SingularityHint",
    "integrate",
    "integrate_semiinfinite",
    "frullani_log",
    "VerifyReport",
    "run_suite",
    "__version__",
]
