"""Eigenpairs of a general system by homotopy continuation.

Paths start at the explicitly known eigenpairs of gamma * (X_1^d, ..., X_n^d) and
follow the eigenpairs of g_t = (1 - t) gamma phi + t f up to t = 1. Each step is
an Euler predictor on the Davidenko equation followed by Newton correction. The
one-dimensional gauge freedom (v, mu) -> (s v, s^{d-1} mu) is removed by
restricting updates to the complement of the kernel direction (v, (d-1) mu) and
renormalizing ||v|| = 1 after every accepted step.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ..polyalg import EigenPair, HomogeneousSystem, _monomials, _tables
from .classes import EigenClassSet, build_class_set, normalize_pair

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StartSystemSolution:
    """Orbit representative z = (eps_j zeta^{i_j}) of the start system's eigenvectors.

    zeta is a primitive (d-1)-th root of unity; entries with eps_j = 0 carry
    i_j = d - 1 by convention. The first nonzero entry is always 1.
    """

    epsilon: tuple[int, ...]
    root_indices: tuple[int, ...]
    d: int

    def point(self) -> np.ndarray:
        zeta = np.exp(2j * np.pi / (self.d - 1))
        return np.array([e * zeta**i for e, i in zip(self.epsilon, self.root_indices)], dtype=complex)

    def eigenpair(self) -> EigenPair:
        # (z, 1) is an eigenpair of the power system; rescale to ||v|| = 1
        z = self.point()
        v, lam = normalize_pair(z, 1.0, self.d)
        return EigenPair(v, lam)


def start_solutions(n: int, d: int) -> list[StartSystemSolution]:
    """One representative per class of eigenpairs of (X_1^d, ..., X_n^d); D(n, d) in total."""
    if d < 2 or n < 1:
        raise ValueError(f"start system needs n >= 1 and d >= 2, got n={n}, d={d}")
    out = []
    for first in range(n):
        rest = n - first - 1
        # each later coordinate is 0 or one of the d-1 roots of unity
        for choice in itertools.product(range(d), repeat=rest):
            eps = [0] * first + [1] + [1 if c else 0 for c in choice]
            idx = [d - 1] * (first + 1) + [c if c else d - 1 for c in choice]
            out.append(StartSystemSolution(tuple(eps), tuple(idx), d))
    return out


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = 0.05
    max_step: float = 0.1
    min_step: float = 1e-10
    grow_after: int = 4
    max_newton: int = 6
    # first Newton correction larger than this rejects the step (path-jump guard)
    max_correction: float = 0.05
    newton_residual: float = 1e-12
    newton_step: float = 1e-13
    residual_tol: float = 1e-10


class _Homotopy:
    def __init__(self, f: HomogeneousSystem, gamma: complex):
        self.n, self.d = f.n, f.d
        self.exps = _tables(f.n, f.d)[1]
        _, _, _, _, self.dfac, self.dexps = _tables(f.n, f.d)
        self.G0 = gamma * HomogeneousSystem.power_system(f.n, f.d).coeffs
        self.G1 = np.asarray(f.coeffs)
        self.dG = self.G1 - self.G0

    def coeffs(self, t: float) -> np.ndarray:
        return self.G0 + t * self.dG

    def value(self, C: np.ndarray, v: np.ndarray, mu: complex) -> np.ndarray:
        return C @ _monomials(v, self.exps) - mu * v

    def jac(self, C: np.ndarray, v: np.ndarray, mu: complex) -> np.ndarray:
        n = self.n
        J = np.empty((n, n + 1), dtype=complex)
        for j in range(n):
            J[:, j] = C @ (self.dfac[j] * _monomials(v, self.dexps[j]))
        J[:, :n] -= mu * np.eye(n)
        J[:, n] = -v
        return J

    def augmented(self, C, v, mu):
        k = np.append(v, (self.d - 1) * mu)
        row = (k / np.linalg.norm(k)).conj()
        return np.vstack([self.jac(C, v, mu), row])

    def newton(self, C, v, mu, cfg: TrackerConfig, max_iter: int, guard: bool):
        """Newton on g(v) = mu v within the chart orthogonal to the kernel direction.

        Returns (v, mu, ok)."""
        n = self.n
        A_row = None
        prev = np.inf
        for it in range(max_iter):
            H = self.value(C, v, mu)
            res = np.linalg.norm(H)
            if res <= cfg.newton_residual:
                return v, mu, True
            if res > prev:
                return v, mu, False
            prev = res
            A = self.augmented(C, v, mu)
            if A_row is None:
                A_row = A[n]
            A[n] = A_row
            try:
                delta = np.linalg.solve(A, np.append(-H, 0.0))
            except np.linalg.LinAlgError:
                return v, mu, False
            size = np.linalg.norm(delta)
            if guard and it == 0 and size > cfg.max_correction:
                return v, mu, False
            v = v + delta[:n]
            mu = mu + delta[n]
            if size <= cfg.newton_step:
                return v, mu, True
        return v, mu, np.linalg.norm(self.value(C, v, mu)) <= cfg.newton_residual

    def track(self, v: np.ndarray, mu: complex, cfg: TrackerConfig):
        n, d = self.n, self.d
        t, dt, streak = 0.0, cfg.initial_step, 0
        while t < 1.0:
            dt = min(dt, 1.0 - t)
            C = self.coeffs(t)
            A = self.augmented(C, v, mu)
            rhs = np.append(-(self.dG @ _monomials(v, self.exps)), 0.0)
            tangent = np.linalg.solve(A, rhs)
            t_new = 1.0 if t + dt >= 1.0 - 1e-14 else t + dt
            vp = v + (t_new - t) * tangent[:n]
            mp = mu + (t_new - t) * tangent[n]
            vc, mc, ok = self.newton(self.coeffs(t_new), vp, mp, cfg, cfg.max_newton, guard=True)
            if not ok:
                dt *= 0.5
                streak = 0
                if dt < cfg.min_step:
                    return v, mu, t, False
                continue
            v, mu = normalize_pair(vc, mc, d)
            t = t_new
            streak += 1
            if streak >= cfg.grow_after:
                dt = min(2 * dt, cfg.max_step)
                streak = 0
        # final polish on f itself
        v, mu, _ = self.newton(self.G1, v, mu, cfg, 20, guard=False)
        v, mu = normalize_pair(v, mu, d)
        return v, mu, 1.0, True


def eigenpairs_homotopy(
    f: HomogeneousSystem,
    config: TrackerConfig | None = None,
    gamma: complex | None = None,
    rng: np.random.Generator | None = None,
) -> EigenClassSet:
    """Track all D(n, d) start eigenpairs to eigenpairs of ``f``.

    ``gamma`` is a unit-modulus constant; if omitted it is drawn from ``rng``.
    """
    cfg = config or TrackerConfig()
    if f.d < 2:
        raise ValueError("homotopy solver needs d >= 2; use eigenpairs_d1 for matrices")
    if gamma is None:
        rng = rng or np.random.default_rng(0)
        gamma = np.exp(2j * np.pi * rng.random())
    hom = _Homotopy(f, gamma)
    starts = start_solutions(f.n, f.d)
    pairs, messages = [], []
    for idx, s in enumerate(starts):
        p = s.eigenpair()
        v, mu, t, ok = hom.track(p.v, gamma * p.lam, cfg)
        if not ok:
            messages.append(f"path {idx} failed at t={t:.6g} (step size underflow)")
            log.debug("path %d failed at t=%g", idx, t)
            continue
        pairs.append(EigenPair(v, mu))
    return build_class_set(f, pairs, len(starts), messages, cfg.residual_tol)
