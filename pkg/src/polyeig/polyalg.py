"""Dense homogeneous polynomial systems over C.

A system ``f = (f_1, ..., f_n)`` of degree ``d`` in ``n`` variables is stored as
an ``(n, k)`` complex array of monomial coefficients, ``k = binom(n-1+d, d)``,
with columns following :func:`enumerate_multi_indices`. Bombieri-Weyl
coordinates are a per-column rescaling: the Weyl coefficient of ``X^alpha`` is
the monomial coefficient divided by ``sqrt(binom(d, alpha))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Sequence

import numpy as np

MultiIndex = tuple[int, ...]


def enumerate_multi_indices(n: int, d: int) -> list[MultiIndex]:
    """All exponent tuples of length ``n`` summing to ``d``, in graded-lex order.

    >>> enumerate_multi_indices(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    if n < 1 or d < 0:
        raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in enumerate_multi_indices(n - 1, d - first):
            out.append((first,) + rest)
    return out


def multinomial(alpha: Sequence[int]) -> int:
    """binom(|alpha|, alpha) = |alpha|! / prod(alpha_i!)."""
    return factorial(sum(alpha)) // prod(factorial(a) for a in alpha)


@lru_cache(maxsize=None)
def _tables(n: int, d: int):
    indices = enumerate_multi_indices(n, d)
    exps = np.array(indices, dtype=np.int64).reshape(len(indices), n)
    scale = np.sqrt(np.array([multinomial(a) for a in indices], dtype=float))
    lookup = {a: i for i, a in enumerate(indices)}
    # derivative tables: d/dX_j X^alpha = alpha_j X^(alpha - e_j)
    dfac = exps.astype(float).T.copy()  # (n, k)
    dexps = np.empty((n, len(indices), n), dtype=np.int64)
    for j in range(n):
        e = exps.copy()
        e[:, j] = np.maximum(e[:, j] - 1, 0)
        dexps[j] = e
    for arr in (exps, scale, dfac, dexps):
        arr.setflags(write=False)
    return indices, exps, scale, lookup, dfac, dexps


def weyl_scale(n: int, d: int) -> np.ndarray:
    """sqrt(binom(d, alpha)) for each multi-index, in enumeration order."""
    return _tables(n, d)[2]


@dataclass(frozen=True)
class HomogeneousPoly:
    """A single homogeneous polynomial, dense over the graded-lex enumeration."""

    n: int
    d: int
    coeffs: np.ndarray  # monomial basis, length binom(n-1+d, d)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (comb(self.n - 1 + self.d, self.d),):
            raise ValueError(f"expected {comb(self.n - 1 + self.d, self.d)} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def weyl_coeffs(self) -> np.ndarray:
        return self.coeffs / weyl_scale(self.n, self.d)

    @classmethod
    def from_weyl(cls, n: int, d: int, weyl: Sequence[complex]) -> HomogeneousPoly:
        return cls(n, d, np.asarray(weyl, dtype=complex) * weyl_scale(n, d))

    @classmethod
    def from_terms(cls, n: int, d: int, terms: dict[MultiIndex, complex]) -> HomogeneousPoly:
        """Build from a sparse ``{alpha: coefficient}`` map in the monomial basis."""
        lookup = _tables(n, d)[3]
        c = np.zeros(len(lookup), dtype=complex)
        for alpha, value in terms.items():
            alpha = tuple(int(a) for a in alpha)
            if alpha not in lookup:
                raise ValueError(f"multi-index {alpha} is not of degree {d} in {n} variables")
            c[lookup[alpha]] += value
        return cls(n, d, c)

    def terms(self) -> dict[MultiIndex, complex]:
        indices = _tables(self.n, self.d)[0]
        return {a: complex(c) for a, c in zip(indices, self.coeffs)}


@dataclass(frozen=True)
class HomogeneousSystem:
    """n homogeneous polynomials of degree d in n variables, a map C^n -> C^n."""

    coeffs: np.ndarray  # (n, k) monomial coefficients
    d: int

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2:
            raise ValueError("coefficient array must be 2-d (n, k)")
        n = c.shape[0]
        if n < 1 or self.d < 0:
            raise ValueError("need n >= 1 and d >= 0")
        k = comb(n - 1 + self.d, self.d)
        if c.shape[1] != k:
            raise ValueError(f"expected {k} columns for n={n}, d={self.d}, got {c.shape[1]}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def weyl_coeffs(self) -> np.ndarray:
        """The (n, k) coefficient matrix ``A`` in the Bombieri-Weyl basis."""
        return self.coeffs / weyl_scale(self.n, self.d)

    @property
    def components(self) -> list[HomogeneousPoly]:
        return [HomogeneousPoly(self.n, self.d, row) for row in self.coeffs]

    @classmethod
    def from_weyl(cls, weyl: np.ndarray, d: int) -> HomogeneousSystem:
        weyl = np.asarray(weyl, dtype=complex)
        return cls(weyl * weyl_scale(weyl.shape[0], d), d)

    @classmethod
    def from_components(cls, polys: Iterable[HomogeneousPoly]) -> HomogeneousSystem:
        polys = list(polys)
        if not polys:
            raise ValueError("empty system")
        n, d = polys[0].n, polys[0].d
        if any((p.n, p.d) != (n, d) for p in polys) or len(polys) != n:
            raise ValueError("a system needs n components sharing (n, d)")
        return cls(np.stack([p.coeffs for p in polys]), d)

    @classmethod
    def from_matrix(cls, A: np.ndarray) -> HomogeneousSystem:
        """The linear system x -> A x (d = 1)."""
        A = np.asarray(A, dtype=complex)
        # for d = 1 the enumeration is e_1, ..., e_n, so columns line up with A
        return cls(A, 1)

    @classmethod
    def power_system(cls, n: int, d: int) -> HomogeneousSystem:
        """The start system (X_1^d, ..., X_n^d)."""
        lookup = _tables(n, d)[3]
        c = np.zeros((n, len(lookup)), dtype=complex)
        for i in range(n):
            alpha = tuple(d if j == i else 0 for j in range(n))
            c[i, lookup[alpha]] = 1.0
        return cls(c, d)

    def __add__(self, other: HomogeneousSystem) -> HomogeneousSystem:
        _check_compatible(self, other)
        return HomogeneousSystem(self.coeffs + other.coeffs, self.d)

    def __mul__(self, scalar: complex) -> HomogeneousSystem:
        return HomogeneousSystem(self.coeffs * scalar, self.d)

    __rmul__ = __mul__


def _check_compatible(f: HomogeneousSystem, g: HomogeneousSystem) -> None:
    if f.coeffs.shape != g.coeffs.shape or f.d != g.d:
        raise ValueError(f"systems differ in (n, d): ({f.n}, {f.d}) vs ({g.n}, {g.d})")


def weyl_inner_product(f: HomogeneousSystem, g: HomogeneousSystem) -> complex:
    """Bombieri-Weyl inner product, linear in ``f`` and conjugate-linear in ``g``."""
    _check_compatible(f, g)
    return complex(np.sum(f.weyl_coeffs * np.conj(g.weyl_coeffs)))


def weyl_norm(f: HomogeneousSystem) -> float:
    # equals the Frobenius norm of the Weyl coefficient matrix
    return float(np.linalg.norm(f.weyl_coeffs))


def _monomials(x: np.ndarray, exps: np.ndarray) -> np.ndarray:
    return np.prod(x[None, :] ** exps, axis=1)


def evaluate(f: HomogeneousSystem, x: Sequence[complex]) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (f.n,):
        raise ValueError(f"point must have length {f.n}, got shape {x.shape}")
    exps = _tables(f.n, f.d)[1]
    return f.coeffs @ _monomials(x, exps)


def jacobian(f: HomogeneousSystem, x: Sequence[complex]) -> np.ndarray:
    """The n x n matrix of partial derivatives of f at x."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (f.n,):
        raise ValueError(f"point must have length {f.n}, got shape {x.shape}")
    _, _, _, _, dfac, dexps = _tables(f.n, f.d)
    J = np.empty((f.n, f.n), dtype=complex)
    for j in range(f.n):
        J[:, j] = f.coeffs @ (dfac[j] * _monomials(x, dexps[j]))
    return J


def residual_map(f: HomogeneousSystem, v: Sequence[complex], lam: complex) -> np.ndarray:
    """F_f(v, lambda) = f(v) - lambda v."""
    v = np.asarray(v, dtype=complex)
    return evaluate(f, v) - lam * v


def jacobian_F(f: HomogeneousSystem, v: Sequence[complex], lam: complex) -> np.ndarray:
    """Derivative of the residual map: the n x (n+1) matrix [Df(v) - lambda I, -v]."""
    v = np.asarray(v, dtype=complex)
    J = jacobian(f, v) - lam * np.eye(f.n)
    return np.hstack([J, -v[:, None]])


def unitary_action(U: np.ndarray, f: HomogeneousSystem) -> HomogeneousSystem:
    """U.f = U o f o U^{-1} for a 2x2 unitary U (n = 2 only)."""
    U = np.asarray(U, dtype=complex)
    if f.n != 2 or U.shape != (2, 2):
        raise NotImplementedError("unitary substitution is implemented for n = 2 only")
    d = f.d
    Uinv = U.conj().T
    # f(U^{-1} x): X_1 -> a x_1 + b x_2, X_2 -> c x_1 + e x_2. A binary form of
    # degree d is a vector indexed by the power of x_2, matching the enumeration
    # (d, 0), (d-1, 1), ..., (0, d).
    (a, b), (c, e) = Uinv
    lin1 = np.array([a, b])
    lin2 = np.array([c, e])
    indices = _tables(2, d)[0]
    basis = np.zeros((len(indices), d + 1), dtype=complex)
    for col, (p, q) in enumerate(indices):
        poly = np.array([1.0 + 0j])
        for _ in range(p):
            poly = np.convolve(poly, lin1)
        for _ in range(q):
            poly = np.convolve(poly, lin2)
        basis[col] = poly
    substituted = f.coeffs @ basis  # (2, d+1)
    return HomogeneousSystem(U @ substituted, d)


def system_to_json(f: HomogeneousSystem, basis: str = "monomial") -> dict:
    if basis == "monomial":
        coeffs = f.coeffs
    elif basis == "weyl":
        coeffs = f.weyl_coeffs
    else:
        raise ValueError(f"unknown basis {basis!r}")
    indices = _tables(f.n, f.d)[0]
    rows = [
        [[list(alpha), float(c.real), float(c.imag)] for alpha, c in zip(indices, row) if c != 0]
        for row in coeffs
    ]
    return {"n": f.n, "d": f.d, "basis": basis, "coeffs": rows}


def system_from_json(obj: dict | str) -> HomogeneousSystem:
    """Parse the coefficient file format. Missing multi-indices mean zero."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    n, d, basis = int(obj["n"]), int(obj["d"]), obj.get("basis", "monomial")
    rows = obj["coeffs"]
    if len(rows) != n:
        raise ValueError(f"expected {n} components, got {len(rows)}")
    lookup = _tables(n, d)[3]
    c = np.zeros((n, len(lookup)), dtype=complex)
    for i, row in enumerate(rows):
        for alpha, re, im in row:
            alpha = tuple(int(a) for a in alpha)
            if alpha not in lookup:
                raise ValueError(f"multi-index {alpha} is not of degree {d} in {n} variables")
            c[i, lookup[alpha]] += complex(re, im)
    if basis == "weyl":
        return HomogeneousSystem.from_weyl(c, d)
    if basis != "monomial":
        raise ValueError(f"unknown basis {basis!r}")
    return HomogeneousSystem(c, d)


@dataclass(frozen=True)
class EigenPair:
    """A normalized eigenpair (v, lambda) with f(v) = lambda v and ||v|| = 1."""

    v: np.ndarray
    lam: complex

    def __post_init__(self):
        v = np.array(self.v, dtype=complex)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "lam", complex(self.lam))

    def residual(self, f: HomogeneousSystem) -> float:
        return float(np.linalg.norm(residual_map(f, self.v, self.lam)))
