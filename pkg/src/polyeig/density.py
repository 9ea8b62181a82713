"""Closed-form eigenvalue distribution of random homogeneous systems.

With ``R = 2|lambda|^2``, the density of ``R`` is a mixture of chi-square laws
with ``2k`` degrees of freedom, ``k = 1..n``: uniform weights for ``d = 1`` and
geometric weights ``q^(k-1)(1-q)/(1-q^n)``, ``q = 1/d``, for ``d > 1``. Real
``d >= 1`` is accepted throughout; the ``d -> 1`` limit is continuous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import exp, expm1, factorial, inf, lgamma, log, log1p, pi

import numpy as np

# above this exponent e^{-x} underflows, so partial sums switch to log space
_LOG_SPACE_THRESHOLD = 700.0


@dataclass(frozen=True)
class DistributionParams:
    n: int
    d: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not self.d >= 1:
            raise ValueError(f"d must be a real number >= 1, got {self.d}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "d", float(self.d))

    @property
    def q(self) -> float:
        return 1.0 / self.d


@dataclass(frozen=True)
class MixtureSpec:
    n: int
    d: float
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.n,) or np.any(w < 0):
            raise ValueError("weights must be n non-negative numbers")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def _one_minus_q_pow(q: float, n: int) -> float:
    # 1 - q^n without cancellation for q near 1
    return -expm1(n * log(q)) if q > 0 else 1.0


def count_classes(params: DistributionParams) -> float:
    """D(n, d) = (d^n - 1)/(d - 1), with value n at d = 1."""
    n, d = params.n, params.d
    if d == 1:
        return float(n)
    try:
        if float(d).is_integer():
            return float((int(d) ** n - 1) // (int(d) - 1))
        # expm1/log1p keep the d -> 1 limit accurate
        return expm1(n * log1p(d - 1)) / (d - 1)
    except OverflowError:
        return inf


def _as_output(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def _exp_partial_sum(x, y, n: int):
    """e^{-x} * sum_{k=0}^{n-1} y^k / k! for x, y >= 0 (elementwise)."""
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.zeros(x.shape)
    if n <= 0:
        return _as_output(out, scalar)
    small = x <= _LOG_SPACE_THRESHOLD
    if small.any():
        xs, ys = x[small], y[small]
        term = np.exp(-xs)
        total = term.copy()
        ymax = ys.max()
        for k in range(1, n):
            term = term * ys / k
            total += term
            if k > ymax and np.all(term <= 1e-18 * total):
                break
        out[small] = total
    if (~small).any():
        xl, yl = x[~small], y[~small]
        with np.errstate(divide="ignore"):
            ly = np.log(yl)
        acc = -xl  # log of the k = 0 term
        logterm = -xl.copy()
        for k in range(1, n):
            logterm = logterm + ly - log(k)
            acc = np.logaddexp(acc, logterm)
        out[~small] = np.exp(acc)
    return _as_output(out, scalar)


def regularized_upper_gamma_int(n: int, x: float) -> float:
    """Q(n, x) = Gamma(n, x)/Gamma(n) for integer n >= 1."""
    if n < 1 or x < 0:
        raise ValueError(f"need n >= 1 and x >= 0, got n={n}, x={x}")
    return _exp_partial_sum(x, x, n)


def upper_incomplete_gamma_int(n: int, x: float) -> float:
    """Gamma(n, x) = (n-1)! e^{-x} sum_{k<n} x^k/k! for integer n >= 1."""
    return exp(lgamma(n)) * regularized_upper_gamma_int(n, x)


def mixture_weights(params: DistributionParams) -> MixtureSpec:
    n, d = params.n, params.d
    if d == 1:
        w = np.full(n, 1.0 / n)
    else:
        q = params.q
        k = np.arange(n)
        w = q**k * ((d - 1) / d) / _one_minus_q_pow(q, n)
    return MixtureSpec(n, d, w)


def _scale_factor(params: DistributionParams) -> float:
    # d^{n-1} / D(n, d) written in terms of q to avoid overflow for large n
    if params.d == 1:
        return 1.0 / params.n
    d = params.d
    return ((d - 1) / d) / _one_minus_q_pow(1.0 / d, params.n)


def density_planar(params: DistributionParams, lam):
    """Density of lambda on the complex plane (depends on |lambda| only)."""
    r2 = np.abs(lam) ** 2
    return _scale_factor(params) / pi * _exp_partial_sum(r2, r2 / params.d, params.n)


def density_radial(params: DistributionParams, R):
    """Density of R = 2|lambda|^2, product form
    d^{n-1}/(2 D(n, d)) e^{-R/2} sum_{k<n} (R/2d)^k/k!."""
    scalar = np.ndim(R) == 0
    R = np.asarray(R, dtype=float)
    Rc = np.maximum(R, 0.0)
    val = 0.5 * _scale_factor(params) * _exp_partial_sum(Rc / 2, Rc / (2 * params.d), params.n)
    return _as_output(np.where(R >= 0, val, 0.0), scalar)


def chi2_even_pdf(k: int, R):
    """Density e^{-R/2} R^{k-1} / (2^k (k-1)!) of chi-square with 2k degrees of freedom."""
    scalar = np.ndim(R) == 0
    R = np.asarray(R, dtype=float)
    pos = np.where(R > 0, R, 1.0)
    with np.errstate(divide="ignore"):
        val = np.exp(-pos / 2 + (k - 1) * np.log(pos) - k * log(2.0) - lgamma(k))
    val = np.where(R > 0, val, 0.0)
    if k == 1:
        val = np.where(R == 0, 0.5, val)
    return _as_output(val, scalar)


def density_radial_mixture(params: DistributionParams, R: float, mixture: MixtureSpec | None = None) -> float:
    """Density of R as sum_k w_k chi^2_{2k}(R)."""
    w = mixture_weights(params).weights if mixture is None else mixture.weights
    scalar = np.ndim(R) == 0
    R = np.asarray(R, dtype=float)
    total = sum(w[k - 1] * chi2_even_pdf(k, R) for k in range(1, params.n + 1))
    return _as_output(np.asarray(total, dtype=float), scalar)


def mixture_cdf(params: DistributionParams, R, mixture: MixtureSpec | None = None):
    """P(2|lambda|^2 <= R) = sum_k w_k P(k, R/2), with P the regularized lower
    incomplete gamma function evaluated from its finite sum."""
    scalar = np.ndim(R) == 0
    w = mixture_weights(params).weights if mixture is None else mixture.weights
    x = np.maximum(np.asarray(R, dtype=float), 0.0) / 2
    total = np.zeros(x.shape)
    small = x <= _LOG_SPACE_THRESHOLD
    if small.any():
        xs = x[small]
        term = np.exp(-xs)
        upper = term.copy()  # Q(k, x), accumulated over k
        acc = np.zeros(xs.shape)
        for k in range(1, len(w) + 1):
            acc += w[k - 1] * (1.0 - upper)
            term = term * xs / k
            upper = upper + term
        total[small] = acc
    if (~small).any():
        xl = x[~small]
        total[~small] = sum(w[k - 1] * (1.0 - _exp_partial_sum(xl, xl, k)) for k in range(1, len(w) + 1))
    return _as_output(np.clip(total, 0.0, 1.0), scalar)


def expectation_modulus_sq(params: DistributionParams) -> float:
    """E|lambda|^2: (n+1)/2 for d = 1, else (n - (n+1)d + d^{n+1})/((d^n - 1)(d - 1))."""
    n, d = params.n, params.d
    if d == 1:
        return (n + 1) / 2
    if d - 1 < 1e-4:
        # the closed form cancels catastrophically here; use sum_k k w_k
        w = mixture_weights(params).weights
        return float(np.dot(np.arange(1, n + 1), w))
    q = params.q
    return (n * q ** (n + 1) - (n + 1) * q**n + 1) / (_one_minus_q_pow(q, n) * (1 - q))


def tau_from_R(params: DistributionParams, R: float) -> float:
    """Normalized eigenvalue modulus: R/(2n) for d = 1, R(d-1)/(4d) otherwise."""
    if params.d == 1:
        return R / (2 * params.n)
    return R * (params.d - 1) / (4 * params.d)


def density_normalized(params: DistributionParams, tau):
    """Density of the normalized modulus tau."""
    scalar = np.ndim(tau) == 0
    tau = np.asarray(tau, dtype=float)
    tc = np.maximum(tau, 0.0)
    n = params.n
    if params.d == 1:
        val = 2 * n * density_radial(params, 2 * n * tc)
    else:
        q = params.q
        x = 2 * tc / (1 - q)
        y = 2 * q * tc / (1 - q)
        val = 2.0 / _one_minus_q_pow(q, n) * _exp_partial_sum(x, y, n)
    return _as_output(np.where(tau >= 0, val, 0.0), scalar)


def density_limit(d: float, tau):
    """n -> infinity limit of the normalized density: 1_[0,1] for d = 1, 2e^{-2 tau} otherwise."""
    scalar = np.ndim(tau) == 0
    tau = np.asarray(tau, dtype=float)
    if d == 1:
        val = ((tau >= 0) & (tau <= 1)).astype(float)
    else:
        val = np.where(tau >= 0, 2.0 * np.exp(-2.0 * np.maximum(tau, 0.0)), 0.0)
    return _as_output(val, scalar)


def expected_det_identity(m: int, t: complex) -> float:
    """E|det(A + tI)|^2 for an m x m Ginibre matrix A: e^{|t|^2} Gamma(m+1, |t|^2)."""
    if m < 1:
        raise ValueError(f"matrix size must be positive, got {m}")
    s = abs(t) ** 2
    # e^{s} Gamma(m+1, s) = m! sum_{k<=m} s^k/k!, evaluated without the exponentials
    term, total = 1.0, 1.0
    for k in range(1, m + 1):
        term *= s / k
        total += term
    return float(factorial(m)) * total
