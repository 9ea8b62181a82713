"""Equivalence classes of normalized eigenpairs.

Two normalized pairs are equivalent when (w, eta) = (e^{i theta} v, e^{i(d-1) theta} lambda).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..polyalg import EigenPair, HomogeneousSystem

DEDUPE_TOL = 1e-7


class OracleError(RuntimeError):
    """A solver could not certify its output."""


def canonicalize(pair: EigenPair, d: int) -> EigenPair:
    """Rotate the phase so the largest-modulus entry of v is real and positive."""
    v = pair.v
    m = int(np.argmax(np.abs(v)))
    theta = -np.angle(v[m])
    rot = np.exp(1j * theta)
    w = v * rot
    w[m] = abs(v[m])
    return EigenPair(w, pair.lam * np.exp(1j * (d - 1) * theta))


def class_distance(a: EigenPair, b: EigenPair, d: int) -> float:
    """min over theta of ||v_a - e^{i theta} v_b|| + |lambda_a - e^{i(d-1) theta} lambda_b|,
    evaluated at the theta that aligns the eigenvectors."""
    theta = -np.angle(np.vdot(a.v, b.v))
    rot = np.exp(1j * theta)
    return float(np.linalg.norm(a.v - rot * b.v) + abs(a.lam - np.exp(1j * (d - 1) * theta) * b.lam))


def normalize_pair(v: np.ndarray, lam: complex, d: int) -> tuple[np.ndarray, complex]:
    """Scale (v, lambda) within its class so that ||v|| = 1."""
    s = np.linalg.norm(v)
    return v / s, lam / s ** (d - 1)


@dataclass
class EigenClassSet:
    """One canonical representative per eigenpair class of a system."""

    d: int
    representatives: list[EigenPair]
    residuals: np.ndarray
    expected_count: int
    valid: bool = True
    messages: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.representatives)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.lam for p in self.representatives], dtype=complex)

    def to_json(self) -> dict:
        return {
            "classes": [
                {
                    "v": [[float(z.real), float(z.imag)] for z in p.v],
                    "lambda": [float(p.lam.real), float(p.lam.imag)],
                    "residual": float(r),
                }
                for p, r in zip(self.representatives, self.residuals)
            ],
            "count": self.count,
            "valid": bool(self.valid),
        }


def build_class_set(
    f: HomogeneousSystem,
    pairs: list[EigenPair],
    expected_count: int,
    messages: list[str] | None = None,
    residual_tol: float = 1e-10,
) -> EigenClassSet:
    """Canonicalize, deduplicate and certify a list of normalized eigenpairs.

    Collisions (two pairs within ``DEDUPE_TOL``) and wrong counts mark the set
    invalid; a system with colliding classes is close to the eigendiscriminant.
    """
    messages = list(messages or [])
    valid = not messages
    reps: list[EigenPair] = []
    for p in pairs:
        c = canonicalize(p, f.d)
        if any(class_distance(c, r, f.d) < DEDUPE_TOL for r in reps):
            valid = False
            messages.append(f"collision: eigenvalue {c.lam:.6g} found twice (near-ill-posed system)")
            continue
        reps.append(c)
    residuals = np.array([p.residual(f) for p in reps])
    if len(reps) != expected_count:
        valid = False
        messages.append(f"found {len(reps)} classes, expected {expected_count}")
    bad = np.flatnonzero(residuals > residual_tol)
    if bad.size:
        valid = False
        messages.append(f"{bad.size} classes exceed residual tolerance {residual_tol:g} (max {residuals.max():.3g})")
    return EigenClassSet(f.d, reps, residuals, expected_count, valid, messages)
