"""Matrix (d = 1) eigenpairs from the characteristic polynomial."""

from __future__ import annotations

import numpy as np

from ..polyalg import EigenPair, HomogeneousSystem
from .classes import EigenClassSet, build_class_set
from .roots import ComplexPolynomial1D, roots_univariate

MAX_N = 12


def faddeev_leverrier(A: np.ndarray) -> np.ndarray:
    """Coefficients of det(zI - A), ascending degree."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    M = np.zeros_like(A)
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + c[n - k + 1] * eye
        c[n - k] = -np.trace(A @ M) / k
    return c


def _inverse_iteration(A: np.ndarray, lam: complex, rng: np.random.Generator, iters: int = 6):
    n = A.shape[0]
    scale = np.linalg.norm(A, 2) or 1.0
    # a tiny offset keeps the shifted matrix numerically invertible
    shift = lam + 1e-10 * scale * (1 + 1j)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    B = A - shift * np.eye(n)
    for _ in range(iters):
        y = np.linalg.solve(B, x)
        x = y / np.linalg.norm(y)
    return x, complex(np.vdot(x, A @ x))


def eigenpairs_d1(A: np.ndarray, rng: np.random.Generator | None = None, residual_tol: float = 1e-10) -> EigenClassSet:
    """Eigenpairs of a complex matrix via Faddeev-LeVerrier and root finding.

    Eigenvalues closer than 1e-6 (relative) are treated as one cluster whose
    eigenvectors are read off the null space of A - lambda I; if that null space
    is smaller than the cluster the matrix is flagged as defective.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > MAX_N:
        raise ValueError(f"characteristic-polynomial route is limited to n <= {MAX_N}")
    rng = rng or np.random.default_rng(0)
    f = HomogeneousSystem.from_matrix(A)
    scale = max(np.linalg.norm(A, 2), 1e-300)
    lams = roots_univariate(ComplexPolynomial1D(faddeev_leverrier(A)), rng=rng)

    messages: list[str] = []
    pairs: list[EigenPair] = []
    used = np.zeros(n, dtype=bool)
    for i in range(n):
        if used[i]:
            continue
        cluster = np.flatnonzero(~used & (np.abs(lams - lams[i]) <= 1e-6 * scale))
        used[cluster] = True
        if cluster.size == 1:
            v, lam = _inverse_iteration(A, lams[i], rng)
            if np.linalg.norm(A @ v - lam * v) > 1e-8 * scale:
                messages.append(f"inverse iteration stalled at eigenvalue {lams[i]:.6g}")
            pairs.append(EigenPair(v, lam))
            continue
        lam = complex(np.mean(lams[cluster]))
        _, s, vh = np.linalg.svd(A - lam * np.eye(n))
        null = vh[n - cluster.size :].conj()
        if s[n - cluster.size] > 1e-6 * scale:
            messages.append(f"defective eigenvalue {lam:.6g} of multiplicity {cluster.size}")
        for v in null:
            pairs.append(EigenPair(v, complex(np.vdot(v, A @ v))))
    return build_class_set(f, pairs, n, messages, residual_tol)
