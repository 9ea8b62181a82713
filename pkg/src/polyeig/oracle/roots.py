"""Univariate complex root finding by Aberth-Ehrlich simultaneous iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classes import OracleError


@dataclass(frozen=True)
class ComplexPolynomial1D:
    """Complex polynomial with coefficients in ascending degree order."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coefficients, dtype=complex))
        scale = np.max(np.abs(c)) if c.size else 0.0
        # trim negligible leading coefficients
        last = len(c) - 1
        while last > 0 and abs(c[last]) <= 1e-13 * scale:
            last -= 1
        c = c[: last + 1].copy()
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coefficients)

    def derivative(self) -> ComplexPolynomial1D:
        return ComplexPolynomial1D(np.polynomial.polynomial.polyder(self.coefficients))

    def scale_at(self, z):
        """sum_k |c_k| |z|^k, the natural size of p(z) for backward-error checks."""
        return np.polynomial.polynomial.polyval(np.abs(z), np.abs(self.coefficients))


def _aberth(p: ComplexPolynomial1D, z: np.ndarray, max_iter: int) -> tuple[np.ndarray, bool]:
    dp = p.derivative()
    eps = np.finfo(float).eps
    done = np.zeros(len(z), dtype=bool)
    for _ in range(max_iter):
        pz = p(z)
        dpz = dp(z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        ratio = pz / dpz
        step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step[done] = 0.0
        z = z - step
        done |= (np.abs(step) <= 4 * eps * np.abs(z)) | (np.abs(p(z)) <= 4 * eps * p.scale_at(z))
        if done.all():
            return z, True
    return z, False


def roots_univariate(
    p: ComplexPolynomial1D, max_iter: int = 500, restarts: int = 5, rng: np.random.Generator | None = None
) -> np.ndarray:
    """All complex roots of ``p`` with multiplicity."""
    if p.degree < 1:
        raise ValueError("polynomial has degree 0 after trimming")
    c = p.coefficients
    n = p.degree
    if n == 1:
        return np.array([-c[0] / c[1]])
    monic = ComplexPolynomial1D(c / c[-1])
    # start on a circle whose radius is the geometric mean of the root moduli
    radius = abs(monic.coefficients[0]) ** (1.0 / n) or 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z0 = radius * np.exp(1j * angles)
    rng = rng or np.random.default_rng(0)
    for attempt in range(restarts + 1):
        z, ok = _aberth(monic, z0, max_iter)
        if ok and np.all(np.isfinite(z)):
            break
        z0 = radius * np.exp(1j * (angles + rng.uniform(0, 2 * np.pi))) * (1 + 0.1 * rng.standard_normal(n))
    else:
        raise OracleError(f"Aberth iteration did not converge after {restarts} restarts")
    # one Newton step on the original coefficients
    dp = p.derivative()
    d = dp(z)
    safe = d != 0
    z[safe] = z[safe] - p(z[safe]) / d[safe]
    return z
