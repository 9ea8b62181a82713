"""Seeded samplers: complex Gaussians, Weyl systems, Ginibre matrices, and the
five-step eigenvalue sampler built from chi-square mixtures."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .polyalg import HomogeneousSystem


class SeededGenerator:
    """A PCG64 stream keyed by a 64-bit seed.

    ``spawn(i)`` derives an independent child stream from ``(seed, i)`` so that
    per-task streams do not depend on how tasks are distributed over workers.
    """

    def __init__(self, seed: int = 0, _key: tuple[int, ...] = ()):
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)
        self._key = tuple(_key)
        self.rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.seed, *self._key])))

    def spawn(self, index: int) -> SeededGenerator:
        return SeededGenerator(self.seed, (*self._key, int(index)))

    def __repr__(self):
        return f"SeededGenerator(seed={self.seed}, key={self._key})"


@dataclass(frozen=True)
class TruncatedGeometricSpec:
    """Geometric law on {1, 2, ...} with failure probability q, conditioned on X <= n."""

    q: float
    n: int

    def __post_init__(self):
        if not 0 <= self.q < 1:
            raise ValueError(f"q must lie in [0, 1), got {self.q}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")

    def pmf(self) -> np.ndarray:
        """P(X = k | X <= n) for k = 1..n."""
        k = np.arange(self.n)
        p = self.q**k * (1 - self.q)
        return p / p.sum()

    def mean(self) -> float:
        q, n = self.q, self.n
        return (n * q ** (n + 1) - (n + 1) * q**n + 1) / ((1 - q**n) * (1 - q))


def sample_complex_std_normal(gen: SeededGenerator, size=None):
    """Complex normal with independent N(0, 1/2) real and imaginary parts."""
    z = gen.rng.standard_normal(size) + 1j * gen.rng.standard_normal(size)
    return z / np.sqrt(2.0)


def sample_weyl_system(n: int, d: int, gen: SeededGenerator) -> HomogeneousSystem:
    """A system whose Bombieri-Weyl coefficients are i.i.d. complex standard normal."""
    if n < 1 or d < 1:
        raise ValueError(f"need n, d >= 1, got n={n}, d={d}")
    k = comb(n - 1 + d, d)
    return HomogeneousSystem.from_weyl(sample_complex_std_normal(gen, (n, k)), d)


def sample_ginibre(n: int, gen: SeededGenerator) -> np.ndarray:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return sample_complex_std_normal(gen, (n, n))


def sample_truncated_geometric(spec: TruncatedGeometricSpec, gen: SeededGenerator, size=None):
    """Inverse-CDF draw from the finite mass function; values in 1..n."""
    cdf = np.cumsum(spec.pmf())
    cdf[-1] = 1.0
    u = gen.rng.random(size)
    k = np.searchsorted(cdf, u, side="right") + 1
    return int(k) if size is None else k


def fold_trial_count(trials, n: int):
    """Map a trial count l >= 1 onto 1..n by k = ((l - 1) mod n) + 1, so l = n gives n."""
    return (trials - 1) % n + 1


def sample_truncated_geometric_modn(q: float, n: int, gen: SeededGenerator, size=None):
    """Bernoulli trials with success probability 1 - q until the first success,
    with the trial count folded onto 1..n.

    Folding a geometric variable this way gives exactly the truncated law, so
    no rejection step is needed.
    """
    if not 0 <= q < 1:
        raise ValueError(f"q must lie in [0, 1), got {q}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if size is None:
        trials = 1
        while gen.rng.random() >= 1 - q:
            trials += 1
        return fold_trial_count(trials, n)
    return fold_trial_count(gen.rng.geometric(1 - q, size), n)


def sample_chi_square(dof: int, gen: SeededGenerator, size=None, method: str = "sum"):
    """Chi-square variate with an even number of degrees of freedom.

    ``method="sum"`` adds ``dof`` squared standard normals; ``method="gamma"``
    draws Gamma(dof/2, scale 2) directly.
    """
    if dof < 2 or dof % 2:
        raise ValueError(f"dof must be a positive even integer, got {dof}")
    if method == "gamma":
        return gen.rng.gamma(dof / 2, 2.0, size)
    if method != "sum":
        raise ValueError(f"unknown method {method!r}")
    shape = (dof,) if size is None else (*np.atleast_1d(size), dof)
    x = gen.rng.standard_normal(shape)
    r = np.sum(x * x, axis=-1)
    return float(r) if size is None else r


def _mixture_index(n: int, d: float, gen: SeededGenerator, size):
    if d == 1:
        k = gen.rng.integers(1, n + 1, size)
        return int(k) if size is None else k
    return sample_truncated_geometric(TruncatedGeometricSpec(1.0 / d, n), gen, size)


def sample_eigenvalue_modulus_sq(n: int, d: float, gen: SeededGenerator, size=None):
    """Draw |lambda|^2 = R/2 with R ~ chi^2_{2k} and k from the mixture weights."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    if size is None:
        k = _mixture_index(n, d, gen, None)
        return 0.5 * sample_chi_square(2 * k, gen)
    k = np.asarray(_mixture_index(n, d, gen, size))
    # literal sum of 2k squared normals, vectorised by masking unused columns
    x = gen.rng.standard_normal((*k.shape, 2 * n))
    mask = np.arange(2 * n) < 2 * k[..., None]
    return 0.5 * np.sum(np.where(mask, x * x, 0.0), axis=-1)


def sample_eigenvalue(n: int, d: float, gen: SeededGenerator, size=None):
    """Complex eigenvalue draw: modulus from the mixture, uniform argument."""
    modsq = sample_eigenvalue_modulus_sq(n, d, gen, size)
    theta = gen.rng.uniform(0.0, 2 * np.pi, size)
    z = np.sqrt(modsq) * np.exp(1j * theta)
    return complex(z) if size is None else z
