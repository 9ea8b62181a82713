"""Numerical solvers returning all eigenpair classes of a concrete system."""

from __future__ import annotations

import numpy as np

from ..polyalg import HomogeneousSystem
from .binary import eigenpairs_binary
from .classes import EigenClassSet, OracleError, canonicalize, class_distance
from .homotopy import StartSystemSolution, TrackerConfig, eigenpairs_homotopy, start_solutions
from .linear import eigenpairs_d1, faddeev_leverrier
from .roots import ComplexPolynomial1D, roots_univariate

__all__ = [
    "ComplexPolynomial1D",
    "EigenClassSet",
    "OracleError",
    "StartSystemSolution",
    "TrackerConfig",
    "canonicalize",
    "class_distance",
    "eigenpairs_binary",
    "eigenpairs_d1",
    "eigenpairs_homotopy",
    "faddeev_leverrier",
    "roots_univariate",
    "solve_eigenpairs",
    "start_solutions",
]


def solve_eigenpairs(f: HomogeneousSystem, rng: np.random.Generator | None = None) -> EigenClassSet:
    """Pick the solver for (n, d): characteristic polynomial for d = 1, binary
    forms for n = 2, homotopy continuation otherwise."""
    if f.d == 1:
        return eigenpairs_d1(f.coeffs, rng=rng)
    if f.n == 2:
        return eigenpairs_binary(f, rng=rng)
    return eigenpairs_homotopy(f, rng=rng)
