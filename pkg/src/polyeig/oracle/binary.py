"""Eigenpairs of two homogeneous polynomials in two variables.

v = (v_1, v_2) is an eigenvector iff v_2 f_1(v) - v_1 f_2(v) = 0, a binary form of
degree d + 1. On the chart v = (1, z) this is p(z) = z f_1(1, z) - f_2(1, z); roots
outside the unit disc are refined on the reversed chart v = (w, 1), w = 1/z.
"""

from __future__ import annotations

import numpy as np

from ..polyalg import EigenPair, HomogeneousSystem, evaluate
from .classes import EigenClassSet, build_class_set, normalize_pair
from .roots import ComplexPolynomial1D, roots_univariate


def _newton(p: ComplexPolynomial1D, z: complex, steps: int = 4) -> complex:
    dp = p.derivative()
    for _ in range(steps):
        d = dp(z)
        if d == 0:
            break
        step = p(z) / d
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def eigenpairs_binary(f: HomogeneousSystem, rng: np.random.Generator | None = None, residual_tol: float = 1e-10) -> EigenClassSet:
    if f.n != 2:
        raise ValueError(f"binary-form solver needs n = 2, got n = {f.n}")
    d = f.d
    # columns are X_1^{d-j} X_2^j, so row i is f_i(1, z) in ascending powers of z
    c1, c2 = f.coeffs
    p = np.zeros(d + 2, dtype=complex)
    p[1:] += c1
    p[:-1] -= c2
    poly = ComplexPolynomial1D(p)
    reverse = ComplexPolynomial1D(p[::-1])

    pairs: list[EigenPair] = []
    if poly.degree < d + 1:
        # X_2^d is missing from f_1, so (0, 1) is an eigenvector
        pairs.append(EigenPair(np.array([0, 1], dtype=complex), c2[d]))
    if poly.degree >= 1:
        for z in roots_univariate(poly, rng=rng):
            if abs(z) <= 1:
                z = _newton(poly, z)
                v = np.array([1.0, z], dtype=complex)
            else:
                w = _newton(reverse, 1.0 / z)
                v = np.array([w, 1.0], dtype=complex)
            v, _ = normalize_pair(v, 0.0, d)
            fv = evaluate(f, v)
            i = 0 if abs(v[0]) >= abs(v[1]) else 1
            pairs.append(EigenPair(v, fv[i] / v[i]))
    return build_class_set(f, pairs, d + 1, residual_tol=residual_tol)
