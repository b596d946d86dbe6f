"""Numerical Poisson calculus: linear Poisson spaces, jet-based bivector
fields, the Poisson-Lie group U(n), the cotangent symplectic groupoid of a
matrix group and the partial-isometry groupoid of a finite von Neumann
algebra, with seeded verification suites."""

from .config import DEFAULT_TOL, default_tol
from .errors import PGLError
from .jet import Jet2
from .linear_poisson import LinearPoissonSpace, Subspace
from .poisson_jet import BivectorField, lie_poisson_bivector
from .suites import SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "default_tol",
    "PGLError",
    "Jet2",
    "LinearPoissonSpace",
    "Subspace",
    "BivectorField",
    "lie_poisson_bivector",
    "SuiteConfig",
    "run_suite",
]
