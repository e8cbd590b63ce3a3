"""Numerical curvature engine for catalog V-static spaces."""

from ._curvlab import (
    CurvlabError,
    Space,
    build,
    checks,
    integrate,
    run_checks,
    schwarzschild_mass_bound,
    schwarzschild_roots,
    spaces,
)

__all__ = [
    "CurvlabError",
    "Space",
    "build",
    "checks",
    "integrate",
    "run_checks",
    "schwarzschild_mass_bound",
    "schwarzschild_roots",
    "spaces",
]
