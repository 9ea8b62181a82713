import json

import numpy as np
import pytest

from polyeig.density import DistributionParams, density_radial, expected_det_identity, mixture_cdf
from polyeig.randgen import SeededGenerator, sample_chi_square, sample_eigenvalue_modulus_sq
from polyeig.stats import (
    CampaignAborted,
    EmpiricalSample,
    chi_square_gof,
    histogram,
    ks_critical_1pct,
    ks_statistic,
    mc_det_identity,
    mc_eigen_campaign,
    mc_eigen_samples,
    moment_check,
)


def theory_sample(n, d, N, seed):
    return EmpiricalSample(2 * sample_eigenvalue_modulus_sq(n, d, SeededGenerator(seed), N))


def test_ks_critical():
    assert ks_critical_1pct(100_000) == pytest.approx(0.00516, abs=1e-5)
    assert ks_critical_1pct(5000) == pytest.approx(0.0231, abs=1e-4)


def test_ks_single_point():
    assert ks_statistic(np.array([1.0]), lambda x: np.full_like(x, 0.5)) == pytest.approx(0.5)


def test_ks_scalar_cdf_fallback():
    # a cdf that only handles scalars is applied point by point
    x = np.array([0.2, 0.5, 0.9])
    scalar_cdf = lambda t: min(max(float(t), 0.0), 1.0)  # noqa: E731
    assert ks_statistic(x, scalar_cdf) == pytest.approx(ks_statistic(x, lambda t: np.clip(t, 0, 1)))


@pytest.mark.parametrize("n,d", [(1, 1), (3, 2), (5, 5)])
def test_ks_calibration(n, d):
    s = theory_sample(n, d, 100_000, 1)
    p = DistributionParams(n, d)
    assert ks_statistic(s, lambda r: mixture_cdf(p, r)) < ks_critical_1pct(len(s))


def test_ks_power():
    r = sample_chi_square(2, SeededGenerator(2), 10_000)
    chi2_4_cdf = lambda x: 1 - np.exp(-x / 2) * (1 + x / 2)  # noqa: E731
    assert ks_statistic(r, chi2_4_cdf) > ks_critical_1pct(10_000)


def test_ks_empty():
    with pytest.raises(ValueError):
        ks_statistic(np.array([]), lambda x: x)


def test_sample_validation():
    with pytest.raises(ValueError):
        EmpiricalSample(np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        EmpiricalSample(np.array([np.nan]))


def test_moment_check_theory_sampler():
    rep = moment_check(theory_sample(2, 2, 100_000, 3), DistributionParams(2, 2))
    assert rep.theoretical_mean_modsq == pytest.approx(4 / 3)
    assert rep.passed
    rep = moment_check(theory_sample(3, 1, 100_000, 4), DistributionParams(3, 1))
    assert rep.theoretical_mean_modsq == 2
    assert rep.passed


def test_moment_check_adversarial():
    rep = moment_check(EmpiricalSample(np.full(1000, 10.0)), DistributionParams(2, 2))
    assert not rep.passed


def test_moment_check_too_small():
    with pytest.raises(ValueError):
        moment_check(EmpiricalSample(np.ones(10)), DistributionParams(2, 2))


def test_report_is_json():
    rep = moment_check(theory_sample(2, 3, 1000, 5), DistributionParams(2, 3))
    obj = json.loads(json.dumps(rep.to_json()))
    assert obj["sample_size"] == 1000 and isinstance(obj["passed"], bool)


def test_chi_square_gof():
    stat, crit = chi_square_gof(np.array([500, 500]), np.array([0.5, 0.5]))
    assert stat == 0 and crit == pytest.approx(6.6349, abs=1e-4)
    stat, crit = chi_square_gof(np.array([900, 100]), np.array([0.5, 0.5]))
    assert stat > crit


def test_det_identity_cases():
    gen = SeededGenerator(6)
    assert mc_det_identity(1, 1, 100_000, gen.spawn(0)).theoretical_mean_modsq == pytest.approx(2)
    assert mc_det_identity(1, 1, 100_000, gen.spawn(0)).passed
    assert mc_det_identity(2, 0, 100_000, gen.spawn(1)).passed
    rep = mc_det_identity(3, 1 + 1j, 100_000, gen.spawn(2))
    assert rep.theoretical_mean_modsq == pytest.approx(expected_det_identity(3, 1 + 1j))
    assert rep.passed


def test_det_identity_size_limit():
    with pytest.raises(ValueError):
        mc_det_identity(7, 0, 10, SeededGenerator(0))


def test_histogram_flat():
    x = np.linspace(0, 1, 10_001)[:-1] + 0.5e-4
    centers, dens, over = histogram(x, 10, 1.0)
    assert over == 0
    assert np.allclose(dens, 1.0, atol=1e-12)
    assert np.allclose(centers, np.arange(10) / 10 + 0.05)


def test_histogram_overflow():
    centers, dens, over = histogram(np.full(50, 5.0), 4, 1.0)
    assert over == 50 and np.all(dens == 0)


def test_histogram_against_density():
    s = theory_sample(2, 2, 100_000, 7)
    centers, dens, over = histogram(s, 40, 20.0)
    # renormalize by the in-range mass to compare with the true density
    inside = 1 - over / len(s)
    assert np.max(np.abs(dens * inside - density_radial(DistributionParams(2, 2), centers))) < 0.02


def test_campaign_uniform_pick_2_2():
    s = mc_eigen_campaign(2, 2, 5000, "uniform_pick", SeededGenerator(8))
    assert s.source == "oracle_uniform_pick" and len(s) == 5000
    p = DistributionParams(2, 2)
    assert ks_statistic(s, lambda r: mixture_cdf(p, r)) < ks_critical_1pct(5000)


def test_campaign_pooled_4_1():
    s = mc_eigen_campaign(4, 1, 5000, "pooled", SeededGenerator(9))
    assert len(s) == 20_000 and s.groups is not None
    rep = moment_check(s, DistributionParams(4, 1))
    assert rep.ks_statistic is None
    assert rep.theoretical_mean_modsq == 2.5
    assert rep.passed


def test_campaign_homotopy_3_2():
    s = mc_eigen_campaign(3, 2, 1000, "uniform_pick", SeededGenerator(10))
    p = DistributionParams(3, 2)
    assert ks_statistic(s, lambda r: mixture_cdf(p, r)) < ks_critical_1pct(len(s))


def test_pooled_and_picked_means_agree():
    pick, pooled = mc_eigen_samples(2, 3, 2000, SeededGenerator(11))
    a, b = pick.values / 2, pooled.values / 2
    se_a = a.std(ddof=1) / np.sqrt(len(a))
    se_b = moment_check(pooled, DistributionParams(2, 3)).standard_error
    assert abs(a.mean() - b.mean()) < 3 * np.hypot(se_a, se_b)


def test_campaign_independent_of_workers():
    one = mc_eigen_campaign(2, 2, 40, "pooled", SeededGenerator(12), workers=1)
    two = mc_eigen_campaign(2, 2, 40, "pooled", SeededGenerator(12), workers=2)
    assert np.array_equal(one.values, two.values)


def test_campaign_rejects_bad_input():
    with pytest.raises(ValueError):
        mc_eigen_campaign(2, 2.5, 10, "pooled", SeededGenerator(0))
    with pytest.raises(ValueError):
        mc_eigen_campaign(2, 2, 10, "everything", SeededGenerator(0))


def test_campaign_aborts_on_failures(monkeypatch):
    import polyeig.stats as st

    def broken(n, d, gen, index):
        return None, 0, ["forced failure"]

    monkeypatch.setattr(st, "_solve_one", broken)
    with pytest.raises(CampaignAborted):
        mc_eigen_campaign(2, 2, 10, "pooled", SeededGenerator(0))
