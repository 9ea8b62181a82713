"""Fixed-seed validation suite: closed forms against quadrature, samplers and
numerical eigenpair solvers against the closed forms.

Each check returns a :class:`CheckResult`; :func:`run_validation` collects them
into a JSON-serializable report. ``fault="weight"`` replaces the theoretical
mixture weights by wrong ones, which must make the suite fail.
"""

from __future__ import annotations

import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.optimize import linear_sum_assignment

from . import density as dn
from .density import DistributionParams, MixtureSpec
from .figures import write_figures
from .oracle import eigenpairs_binary, eigenpairs_homotopy
from .randgen import (
    SeededGenerator,
    TruncatedGeometricSpec,
    sample_eigenvalue_modulus_sq,
    sample_truncated_geometric_modn,
    sample_weyl_system,
)
from .stats import chi_square_gof, ks_critical_1pct, ks_statistic, mc_det_identity, mc_eigen_samples, moment_check

DEFAULT_SEED = 20150923

REPORT_SCHEMA = {
    "type": "object",
    "required": ["seed", "passed", "checks"],
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "passed": {"type": "boolean"},
        "fault": {"type": ["string", "null"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "criterion", "passed", "details", "seconds"],
                "properties": {
                    "name": {"type": "string"},
                    "criterion": {"type": "integer", "minimum": 1},
                    "passed": {"type": "boolean"},
                    "details": {"type": "object"},
                    "seconds": {"type": "number", "minimum": 0},
                },
            },
        },
    },
}


@dataclass
class CheckResult:
    name: str
    criterion: int
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion:>2} {self.name}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "criterion": self.criterion,
            "passed": bool(self.passed),
            "details": _jsonable(self.details),
            "seconds": self.seconds,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def theory_mixture(params: DistributionParams, fault: str | None = None) -> MixtureSpec:
    w = dn.mixture_weights(params)
    if fault == "weight" and params.n > 1:
        k = np.arange(1, params.n + 1)
        wrong = w.weights * k
        return MixtureSpec(params.n, params.d, wrong / wrong.sum())
    return w


def _increasing_to_limit(values, limit: float, resolution: float = 1e-12) -> bool:
    """Strictly increasing while the values are resolvably below ``limit``;
    past that point double precision can only show a non-decreasing tail."""
    values = np.asarray(values, dtype=float)
    step = np.diff(values)
    resolvable = limit - values[1:] > resolution
    return bool(np.all(step >= 0) and np.all(step[resolvable] > 0))


def check_closed_form_equality(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    R = np.arange(0, 501) * 0.1
    worst = 0.0
    for n in range(1, 11):
        for d in range(1, 6):
            p = DistributionParams(n, d)
            diff = np.abs(dn.density_radial_mixture(p, R, theory_mixture(p, fault)) - dn.density_radial(p, R))
            worst = max(worst, float(diff.max()))
    return CheckResult("closed_form_equality", 1, worst <= 1e-12, {"max_abs_diff": worst, "tolerance": 1e-12})


def check_sampler_gof(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    N = 100_000
    gen = SeededGenerator(seed).spawn(2)
    crit = ks_critical_1pct(N)
    rows, ok = [], True
    for n in range(1, 6):
        for d in range(1, 6):
            p = DistributionParams(n, d)
            R = 2 * sample_eigenvalue_modulus_sq(n, d, gen.spawn(10 * n + d), size=N)
            mix = theory_mixture(p, fault)
            ks = ks_statistic(R, lambda r: dn.mixture_cdf(p, r, mix))
            ok &= ks < crit
            rows.append({"n": n, "d": d, "ks": ks})
    return CheckResult("sampler_gof", 2, bool(ok), {"critical": crit, "max_ks": max(r["ks"] for r in rows), "cases": rows})


def check_modn_equivalence(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    N = 100_000
    gen = SeededGenerator(seed).spawn(3)
    rows, ok = [], True
    for i, (q, n) in enumerate([(0.5, 2), (1 / 3, 5), (0.9, 4)]):
        k = sample_truncated_geometric_modn(q, n, gen.spawn(i), size=N)
        counts = np.bincount(k, minlength=n + 1)[1:]
        stat, crit = chi_square_gof(counts, TruncatedGeometricSpec(q, n).pmf())
        ok &= stat < crit
        rows.append({"q": q, "n": n, "chi2": stat, "critical": crit})
    return CheckResult("modn_equivalence", 3, bool(ok), {"cases": rows})


def check_expectations(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    worst = 0.0
    for n in range(1, 7):
        for d in range(1, 6):
            p = DistributionParams(n, d)
            quad, _ = integrate.quad(lambda r: 0.5 * r * dn.density_radial(p, r), 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
            worst = max(worst, abs(quad - dn.expectation_modulus_sq(p)))
    spot_41 = dn.expectation_modulus_sq(DistributionParams(4, 1))
    spot_22 = dn.expectation_modulus_sq(DistributionParams(2, 2))
    spots_ok = spot_41 == 2.5 and abs(spot_22 - 4 / 3) <= 1e-15

    dec_ok = True
    for n in (2, 3, 5, 10):
        vals = [dn.expectation_modulus_sq(DistributionParams(n, d)) for d in np.arange(1, 10.0001, 0.25)]
        dec_ok &= bool(np.all(np.diff(vals) < 0))
    inc_ok = True
    for d in (1, 2, 3, 5):
        vals = [dn.expectation_modulus_sq(DistributionParams(n, d)) for n in range(1, 31)]
        inc_ok &= _increasing_to_limit(vals, np.inf if d == 1 else d / (d - 1))
    passed = worst <= 1e-8 and spots_ok and dec_ok and inc_ok
    return CheckResult(
        "expectations",
        4,
        passed,
        {"max_quadrature_diff": worst, "E(4,1)": spot_41, "E(2,2)": spot_22, "decreasing_in_d": dec_ok, "increasing_in_n": inc_ok},
    )


def _spectra(n: int, d: int, systems: int, gen: SeededGenerator, workers: int, fault):
    p = DistributionParams(n, d)
    mix = theory_mixture(p, fault)
    pick, pooled = mc_eigen_samples(n, d, systems, gen, workers)
    ks = ks_statistic(pick, lambda r: dn.mixture_cdf(p, r, mix))
    crit = ks_critical_1pct(len(pick))
    report = moment_check(pooled, p, mix)
    return {
        "n": n,
        "d": d,
        "systems": systems,
        "skipped": pick.skipped,
        "class_count_rate": 1 - pick.skipped / systems,
        "ks": ks,
        "ks_critical": crit,
        "pooled_mean_modsq": report.empirical_mean_modsq,
        "theory_mean_modsq": report.theoretical_mean_modsq,
        "standard_error": report.standard_error,
        "passed": bool(ks < crit and report.passed and pick.skipped <= 0.01 * systems),
    }


def check_spectra_d1(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    case = _spectra(4, 1, 5000, SeededGenerator(seed).spawn(5), workers, fault)
    return CheckResult("spectra_d1", 5, case["passed"], case)


def check_spectra_binary(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    gen = SeededGenerator(seed).spawn(6)
    cases = [_spectra(2, d, 5000, gen.spawn(d), workers, fault) for d in (2, 3)]
    return CheckResult("spectra_binary", 6, all(c["passed"] for c in cases), {"cases": cases})


def check_homotopy_oracle(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    gen = SeededGenerator(seed).spawn(7)
    good = 0
    for i in range(100):
        sub = gen.spawn(i)
        res = eigenpairs_homotopy(sample_weyl_system(3, 2, sub), rng=sub.rng)
        good += res.valid and res.count == 7 and bool(np.all(res.residuals <= 1e-10))
    worst = 0.0
    matched = gen.spawn(1000)
    for i in range(50):
        sub = matched.spawn(i)
        f = sample_weyl_system(2, 3, sub)
        a = eigenpairs_binary(f).eigenvalues
        b = eigenpairs_homotopy(f, rng=sub.rng).eigenvalues
        if len(a) != len(b):
            worst = np.inf
            continue
        cost = np.abs(a[:, None] - b[None, :])
        r, c = linear_sum_assignment(cost)
        worst = max(worst, float(cost[r, c].max()))
    passed = good >= 99 and worst <= 1e-8
    return CheckResult("homotopy_oracle", 7, passed, {"certified_runs_3_2": good, "of": 100, "max_match_error_2_3": worst})


def check_det_identity(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    gen = SeededGenerator(seed).spawn(8)
    rows, ok = [], True
    for m in (1, 2, 3):
        for j, t in enumerate((0, 1, 1 + 1j)):
            rep = mc_det_identity(m, t, 100_000, gen.spawn(10 * m + j))
            ok &= rep.passed
            rows.append({"m": m, "t": [complex(t).real, complex(t).imag], "mean": rep.empirical_mean_modsq, "theory": rep.theoretical_mean_modsq, "se": rep.standard_error})
    return CheckResult("det_identity", 8, bool(ok), {"cases": rows})


def check_limit_d2(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    tau = np.arange(0, 1001) * 0.01
    dev = float(np.max(np.abs(dn.density_normalized(DistributionParams(500, 2), tau) - dn.density_limit(2, tau))))
    return CheckResult("limit_d2", 9, dev <= 1e-8, {"n": 500, "max_abs_dev": dev, "tolerance": 1e-8})


def check_limit_d1(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    tau = np.concatenate([np.arange(0, 86) * 0.01, 1.15 + np.arange(0, 186) * 0.01])
    dev = np.abs(dn.density_normalized(DistributionParams(100, 1), tau) - dn.density_limit(1, tau))
    worst = float(dev.max())
    return CheckResult(
        "limit_d1",
        9,
        worst <= 0.06,
        {"n": 100, "max_abs_dev": worst, "argmax_tau": float(tau[int(dev.argmax())]), "tolerance": 0.06},
    )


def check_figures(seed: int, workers: int = 1, fault: str | None = None) -> CheckResult:
    with tempfile.TemporaryDirectory() as tmp:
        write_figures(tmp)
        tables = {p.stem: np.genfromtxt(p, delimiter=",", names=True) for p in Path(tmp).glob("*.csv")}
    left, right, f2r = tables["fig1_left"], tables["fig1_right"], tables["fig2_right"]
    anchors = {}
    d1 = left[left["d"] == 1.0]
    anchors["fig1_left_d1"] = {f"n{n}": float(d1[f"n{n}"][0]) for n in (2, 3, 5, 10)}
    ok = all(anchors["fig1_left_d1"][f"n{n}"] == (n + 1) / 2 for n in (2, 3, 5, 10))
    ok &= bool(np.all(right["d1"] == (right["n"] + 1) / 2))
    anchors["fig2_right_limit_tau0"] = float(f2r["limit"][f2r["tau"] == 0.0][0])
    ok &= anchors["fig2_right_limit_tau0"] == 2.0
    mono = all(np.all(np.diff(left[f"n{n}"]) < 0) for n in (2, 3, 5, 10))
    mono &= all(_increasing_to_limit(right[f"d{d}"], np.inf if d == 1 else d / (d - 1)) for d in (1, 2, 3, 5))
    anchors["fig1_right_n30_d2"] = float(right["d2"][-1])
    return CheckResult("figures", 10, bool(ok and mono), {"anchors": anchors, "monotone": bool(mono)})


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "closed_form_equality": check_closed_form_equality,
    "sampler_gof": check_sampler_gof,
    "modn_equivalence": check_modn_equivalence,
    "expectations": check_expectations,
    "spectra_d1": check_spectra_d1,
    "spectra_binary": check_spectra_binary,
    "homotopy_oracle": check_homotopy_oracle,
    "det_identity": check_det_identity,
    "limit_d2": check_limit_d2,
    "limit_d1": check_limit_d1,
    "figures": check_figures,
}


def run_check(name: str, seed: int = DEFAULT_SEED, workers: int = 1, fault: str | None = None) -> CheckResult:
    t0 = time.perf_counter()
    res = CHECKS[name](seed, workers, fault)
    res.seconds = time.perf_counter() - t0
    return res


def run_validation(
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    checks: list[str] | None = None,
    fault: str | None = None,
    progress: Callable[[CheckResult], None] | None = None,
) -> dict:
    names = checks or list(CHECKS)
    unknown = set(names) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    results = []
    for name in names:
        res = run_check(name, seed, workers, fault)
        if progress:
            progress(res)
        results.append(res)
    return {
        "seed": seed,
        "fault": fault,
        "passed": all(r.passed for r in results),
        "checks": [r.to_json() for r in results],
    }
