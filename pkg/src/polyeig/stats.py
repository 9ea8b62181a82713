"""Goodness-of-fit checks tying samplers and oracle output to the closed forms."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy import stats as sps

from .density import DistributionParams, MixtureSpec, count_classes, expectation_modulus_sq, expected_det_identity, mixture_cdf
from .oracle import solve_eigenpairs
from .randgen import SeededGenerator, sample_complex_std_normal, sample_weyl_system

log = logging.getLogger(__name__)

Source = Literal["theory_sampler", "oracle_pooled", "oracle_uniform_pick"]

MAX_SKIP_FRACTION = 0.005
MIN_MOMENT_SAMPLES = 100


def ks_critical_1pct(n: int) -> float:
    """Asymptotic 1% critical value of the one-sample Kolmogorov statistic."""
    return float(1.63 / np.sqrt(n))


class CampaignAborted(RuntimeError):
    pass


@dataclass
class EmpiricalSample:
    """Draws of R = 2|lambda|^2.

    ``groups`` holds the originating system of each value for pooled oracle
    samples, whose values are dependent within a system.
    """

    values: np.ndarray
    source: Source = "theory_sampler"
    skipped: int = 0
    systems: int = 0
    groups: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("sample values must be finite and non-negative")

    def __len__(self):
        return len(self.values)


@dataclass
class GofReport:
    sample_size: int
    ks_statistic: float | None
    ks_critical_1pct: float | None
    empirical_mean_modsq: float
    theoretical_mean_modsq: float
    standard_error: float
    passed: bool
    skipped: int = 0
    label: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def ks_statistic(sample: EmpiricalSample | np.ndarray, cdf: Callable) -> float:
    """sup |F_N - F| for the empirical CDF of ``sample``; ``cdf`` may be vectorized."""
    x = np.sort(np.asarray(sample.values if isinstance(sample, EmpiricalSample) else sample, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("empty sample")
    try:
        F = np.asarray(cdf(x), dtype=float)
    except (TypeError, ValueError):
        F = None
    if F is None or F.shape != x.shape:
        F = np.array([cdf(v) for v in x], dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def _mean_and_se(sample: EmpiricalSample) -> tuple[float, float]:
    half = sample.values / 2
    if sample.groups is None:
        return float(half.mean()), float(half.std(ddof=1) / np.sqrt(len(half)))
    # cluster-robust error: values of one system are dependent
    _, inv, counts = np.unique(sample.groups, return_inverse=True, return_counts=True)
    sums = np.bincount(inv, weights=half)
    g = len(counts)
    mean = sums.sum() / counts.sum()
    resid = sums - mean * counts
    se = np.sqrt(g / (g - 1) * np.sum(resid**2)) / counts.sum()
    return float(mean), float(se)


def moment_check(
    sample: EmpiricalSample,
    params: DistributionParams,
    mixture: MixtureSpec | None = None,
    label: str = "",
) -> GofReport:
    """Mean of R/2 against E|lambda|^2 (3 standard errors), plus a KS test
    against the mixture CDF for i.i.d. samples (not for pooled oracle output)."""
    if len(sample) < MIN_MOMENT_SAMPLES:
        raise ValueError(f"need at least {MIN_MOMENT_SAMPLES} draws for a moment check, got {len(sample)}")
    mean, se = _mean_and_se(sample)
    if mixture is None:
        theory = expectation_modulus_sq(params)
    else:
        theory = float(np.dot(np.arange(1, params.n + 1), mixture.weights))
    moment_ok = abs(mean - theory) < 3 * se
    ks = crit = None
    ks_ok = True
    if sample.source != "oracle_pooled":
        ks = ks_statistic(sample, lambda r: mixture_cdf(params, r, mixture))
        crit = ks_critical_1pct(len(sample))
        ks_ok = ks < crit
    return GofReport(
        sample_size=len(sample),
        ks_statistic=ks,
        ks_critical_1pct=crit,
        empirical_mean_modsq=mean,
        theoretical_mean_modsq=theory,
        standard_error=se,
        passed=bool(moment_ok and ks_ok),
        skipped=sample.skipped,
        label=label or f"{sample.source} n={params.n} d={params.d:g}",
    )


def chi_square_gof(counts: np.ndarray, probs: np.ndarray) -> tuple[float, float]:
    """Pearson statistic and its 1% critical value (len(probs) - 1 degrees of freedom)."""
    counts = np.asarray(counts, dtype=float)
    expected = counts.sum() * np.asarray(probs, dtype=float)
    stat = float(np.sum((counts - expected) ** 2 / expected))
    return stat, float(sps.chi2.ppf(0.99, len(probs) - 1))


def _solve_one(n: int, d: int, gen: SeededGenerator, index: int):
    sub = gen.spawn(index)
    f = sample_weyl_system(n, d, sub)
    classes = solve_eigenpairs(f, rng=sub.rng)
    if not classes.valid:
        return None, 0, classes.messages
    pick = int(sub.rng.integers(classes.count))
    return classes.eigenvalues, pick, None


def _solve_chunk(args):
    n, d, gen, indices = args
    return [_solve_one(n, d, gen, i) for i in indices]


def _run_systems(n: int, d: int, systems: int, gen: SeededGenerator, workers: int):
    if workers <= 1 or systems < 2 * workers:
        return [_solve_one(n, d, gen, i) for i in range(systems)]
    chunks = [(n, d, gen, list(range(i, systems, workers))) for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_solve_chunk, chunks))
    out = [None] * systems
    for (_, _, _, idx), part in zip(chunks, parts):
        for i, r in zip(idx, part):
            out[i] = r
    return out


def mc_eigen_samples(
    n: int, d: int, systems: int, gen: SeededGenerator, workers: int = 1
) -> tuple[EmpiricalSample, EmpiricalSample]:
    """Solve ``systems`` Weyl systems once and return both the uniform-pick and
    the pooled sample of R = 2|lambda|^2.

    System ``i`` uses the child stream ``gen.spawn(i)``, so the result does not
    depend on ``workers``. Invalid oracle runs are skipped; more than 0.5%
    skipped systems abort the campaign.
    """
    if int(d) != d or d < 1:
        raise ValueError("campaigns need an integer degree d >= 1")
    results = _run_systems(n, int(d), systems, gen, workers)
    picked, pooled, groups, skipped = [], [], [], 0
    for i, (lams, pick, messages) in enumerate(results):
        if lams is None:
            skipped += 1
            log.info("system %d skipped: %s", i, "; ".join(messages))
            continue
        r = 2 * np.abs(lams) ** 2
        picked.append(r[pick])
        pooled.extend(r)
        groups.extend([i] * len(r))
    if skipped > MAX_SKIP_FRACTION * systems:
        raise CampaignAborted(f"{skipped} of {systems} systems skipped (limit {MAX_SKIP_FRACTION:.1%})")
    return (
        EmpiricalSample(np.array(picked), "oracle_uniform_pick", skipped, systems),
        EmpiricalSample(np.array(pooled), "oracle_pooled", skipped, systems, np.array(groups)),
    )


def mc_eigen_campaign(
    n: int,
    d: int,
    systems: int,
    mode: Literal["uniform_pick", "pooled"],
    gen: SeededGenerator,
    workers: int = 1,
) -> EmpiricalSample:
    """One sample of R = 2|lambda|^2 from oracle solutions of random Weyl systems.

    ``uniform_pick`` keeps one class per system, chosen uniformly (i.i.d. draws);
    ``pooled`` keeps every class.
    """
    if mode not in ("uniform_pick", "pooled"):
        raise ValueError(f"unknown mode {mode!r}")
    pick, pooled = mc_eigen_samples(n, d, systems, gen, workers)
    return pick if mode == "uniform_pick" else pooled


def class_count_rate(n: int, d: int, systems: int, gen: SeededGenerator, workers: int = 1) -> float:
    """Fraction of systems for which the oracle certified exactly D(n, d) classes."""
    results = _run_systems(n, d, systems, gen, workers)
    expected = round(count_classes(DistributionParams(n, d)))
    ok = sum(1 for lams, _, _ in results if lams is not None and len(lams) == expected)
    return ok / systems


def mc_det_identity(m: int, t: complex, N: int, gen: SeededGenerator) -> GofReport:
    """Monte Carlo mean of |det(A + tI)|^2 over Ginibre matrices against the closed form."""
    if m > 6:
        raise ValueError("matrix size is limited to m <= 6")
    A = sample_complex_std_normal(gen, (N, m, m)) + t * np.eye(m)
    vals = np.abs(np.linalg.det(A)) ** 2
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / np.sqrt(N))
    theory = expected_det_identity(m, t)
    return GofReport(
        sample_size=N,
        ks_statistic=None,
        ks_critical_1pct=None,
        empirical_mean_modsq=mean,
        theoretical_mean_modsq=theory,
        standard_error=se,
        passed=abs(mean - theory) < 3 * se,
        label=f"det m={m} t={t}",
    )


def histogram(sample: EmpiricalSample | np.ndarray, bins: int, range_max: float):
    """Density histogram on [0, range_max].

    Returns ``(centers, density, overflow)``; ``density`` integrates to 1 over
    the in-range values, ``overflow`` counts values beyond ``range_max``.
    """
    if bins < 2:
        raise ValueError("need at least 2 bins")
    x = np.asarray(sample.values if isinstance(sample, EmpiricalSample) else sample, dtype=float)
    edges = np.linspace(0.0, range_max, bins + 1)
    inside = x <= range_max
    counts, _ = np.histogram(x[inside], bins=edges)
    width = edges[1] - edges[0]
    total = counts.sum()
    density = counts / (total * width) if total else np.zeros(bins)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, density, int((~inside).sum())
