import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from polyeig.density import DistributionParams, count_classes
from polyeig.oracle import (
    ComplexPolynomial1D,
    OracleError,
    TrackerConfig,
    canonicalize,
    class_distance,
    eigenpairs_binary,
    eigenpairs_d1,
    eigenpairs_homotopy,
    faddeev_leverrier,
    roots_univariate,
    solve_eigenpairs,
    start_solutions,
)
from polyeig.oracle.classes import build_class_set
from polyeig.polyalg import EigenPair, HomogeneousPoly, HomogeneousSystem, residual_map
from polyeig.randgen import SeededGenerator, sample_ginibre, sample_weyl_system


def random_system(n, d, seed):
    return sample_weyl_system(n, d, SeededGenerator(seed))


def matched_error(a, b):
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(cost)
    return cost[r, c].max()


def has_class(result, v, lam, d):
    target = EigenPair(np.asarray(v, dtype=complex) / np.linalg.norm(v), lam)
    return any(class_distance(p, target, d) < 1e-9 for p in result.representatives)


def certified(result, f):
    for p in result.representatives:
        assert np.linalg.norm(residual_map(f, p.v, p.lam)) <= 1e-10
        assert abs(np.linalg.norm(p.v) - 1) <= 1e-12
    for i, a in enumerate(result.representatives):
        for b in result.representatives[i + 1 :]:
            assert class_distance(a, b, result.d) > 1e-9


# roots


def test_roots_examples():
    r = roots_univariate(ComplexPolynomial1D([-1, 0, 1]))
    assert matched_error(r, [1, -1]) < 1e-14
    r = roots_univariate(ComplexPolynomial1D([0, 1, -1]))
    assert matched_error(r, [0, 1]) < 1e-14


def test_roots_vieta_degree_8():
    rng = np.random.default_rng(0)
    for _ in range(10):
        c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        r = roots_univariate(ComplexPolynomial1D(c), rng=rng)
        assert len(r) == 8
        assert abs(r.sum() + c[7] / c[8]) <= 1e-8
        assert matched_error(r, np.roots(c[::-1])) < 1e-8


def test_roots_multiple_root():
    # (z - 1)^2 (z + 2): the double root is only resolved to about sqrt(eps)
    c = np.polynomial.polynomial.polyfromroots([1, 1, -2])
    r = roots_univariate(ComplexPolynomial1D(c))
    assert matched_error(r, [1, 1, -2]) < 1e-6


def test_roots_trims_leading_zeros():
    p = ComplexPolynomial1D([2, 1, 0, 0])
    assert p.degree == 1
    assert roots_univariate(p)[0] == pytest.approx(-2)


def test_roots_degree_zero():
    with pytest.raises(ValueError):
        roots_univariate(ComplexPolynomial1D([3.0]))


def test_polynomial_evaluation_and_derivative():
    p = ComplexPolynomial1D([1, 2, 3])
    assert p(2) == 17
    assert np.allclose(p.derivative().coefficients, [2, 6])


# canonicalize


def test_canonicalize_example():
    lam = 0.3 + 0.7j
    out = canonicalize(EigenPair([1j, 0], lam), 2)
    assert np.allclose(out.v, [1, 0])
    assert out.lam == pytest.approx(-1j * lam)


@settings(max_examples=50)
@given(
    st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=1, max_size=4),
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.floats(0, 2 * np.pi),
    st.integers(1, 5),
)
def test_canonicalize_phase_invariance(v, lam, theta, d):
    v = np.array(v)
    if np.linalg.norm(v) < 1e-3:
        return
    v = v / np.linalg.norm(v)
    # ties between entries of equal modulus would make the pivot ambiguous
    mags = np.sort(np.abs(v))
    if len(v) > 1 and mags[-1] - mags[-2] < 1e-6:
        return
    a = canonicalize(EigenPair(v, lam), d)
    b = canonicalize(EigenPair(np.exp(1j * theta) * v, np.exp(1j * (d - 1) * theta) * lam), d)
    assert np.allclose(a.v, b.v, atol=1e-12)
    assert abs(a.lam - b.lam) <= 1e-12 * max(1, abs(lam))
    c = canonicalize(a, d)
    assert np.array_equal(c.v, a.v) and c.lam == a.lam


def test_build_class_set_merges_and_flags_duplicates():
    # two solutions in one class mean some other class was missed
    phi = HomogeneousSystem.power_system(2, 2)
    p = EigenPair([1, 0], 1)
    res = build_class_set(phi, [p, EigenPair([1j, 0], 1j)], 1, [])
    assert res.count == 1
    assert not res.valid
    assert any("collision" in m for m in res.messages)


def test_build_class_set_flags_count_mismatch_and_residual():
    phi = HomogeneousSystem.power_system(2, 2)
    res = build_class_set(phi, [EigenPair([1, 0], 1)], 3, [])
    assert not res.valid
    res = build_class_set(phi, [EigenPair([1, 0], 2)], 1, [])
    assert not res.valid


# d = 1


def test_faddeev_leverrier_matches_numpy():
    A = sample_ginibre(5, SeededGenerator(1))
    assert np.allclose(faddeev_leverrier(A)[::-1], np.poly(A))


def test_d1_identity():
    res = eigenpairs_d1(np.eye(3))
    assert res.valid and res.count == 3
    assert np.allclose(res.eigenvalues, 1)


def test_d1_diagonal():
    res = eigenpairs_d1(np.diag([1.0, 2.0]))
    assert sorted(res.eigenvalues.real) == pytest.approx([1, 2])
    assert has_class(res, [1, 0], 1, 1) and has_class(res, [0, 1], 2, 1)
    lams = np.array([3, -1j, 0.5, 2 + 2j])
    assert matched_error(eigenpairs_d1(np.diag(lams)).eigenvalues, lams) < 1e-12


def test_d1_ginibre_residuals():
    gen = SeededGenerator(2)
    for i in range(50):
        A = sample_ginibre(4, gen.spawn(i))
        res = eigenpairs_d1(A)
        assert res.valid and res.count == 4
        for p in res.representatives:
            assert np.linalg.norm(A @ p.v - p.lam * p.v) <= 1e-8
        assert matched_error(res.eigenvalues, np.linalg.eigvals(A)) < 1e-9


def test_d1_defective_is_flagged():
    res = eigenpairs_d1(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert not res.valid
    assert any("defective" in m for m in res.messages)


def test_d1_size_limit():
    with pytest.raises(ValueError):
        eigenpairs_d1(np.eye(13))


# binary forms


def test_binary_power_system_d2():
    phi = HomogeneousSystem.power_system(2, 2)
    res = eigenpairs_binary(phi)
    assert res.valid and res.count == 3
    s = 1 / np.sqrt(2)
    assert has_class(res, [1, 0], 1, 2)
    assert has_class(res, [0, 1], 1, 2)
    assert has_class(res, [s, s], s, 2)


def test_binary_power_system_d3():
    res = eigenpairs_binary(HomogeneousSystem.power_system(2, 3))
    assert res.valid and res.count == 4
    s = 1 / np.sqrt(2)
    for v, lam in [([1, 0], 1), ([0, 1], 1), ([s, s], 0.5), ([s, -s], 0.5)]:
        assert has_class(res, v, lam, 3)


def test_binary_random_d2():
    for seed in range(30):
        f = random_system(2, 2, seed)
        res = eigenpairs_binary(f)
        assert res.valid and res.count == 3
        certified(res, f)


def test_binary_rejects_other_n():
    with pytest.raises(ValueError):
        eigenpairs_binary(random_system(3, 2, 0))


# start system and homotopy


def test_start_solutions_n2_d2():
    sols = start_solutions(2, 2)
    assert len(sols) == 3
    pts = {tuple(np.round(s.point().real, 12)) for s in sols}
    assert pts == {(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)}
    s = 1 / np.sqrt(2)
    pairs = [s_.eigenpair() for s_ in sols]
    assert any(np.allclose(p.v, [s, s]) and p.lam == pytest.approx(s) for p in pairs)


def test_start_solutions_n1_d3():
    sols = start_solutions(1, 3)
    assert len(sols) == 1
    p = sols[0].eigenpair()
    assert np.allclose(p.v, [1]) and p.lam == pytest.approx(1)


@pytest.mark.parametrize("n,d", [(3, 2), (2, 4), (3, 3), (4, 2), (1, 5)])
def test_start_solutions_count_and_residual(n, d):
    sols = start_solutions(n, d)
    assert len(sols) == count_classes(DistributionParams(n, d))
    phi = HomogeneousSystem.power_system(n, d)
    res = build_class_set(phi, [s.eigenpair() for s in sols], len(sols), [])
    assert res.valid and res.count == len(sols)


def test_homotopy_on_start_system_is_constant():
    for n, d in [(2, 2), (3, 2), (2, 3)]:
        phi = HomogeneousSystem.power_system(n, d)
        res = eigenpairs_homotopy(phi, gamma=1.0)
        assert res.valid
        for s in start_solutions(n, d):
            p = s.eigenpair()
            assert has_class(res, p.v, p.lam, d)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_homotopy_agrees_with_binary(d):
    for seed in range(50):
        f = random_system(2, d, 1000 * d + seed)
        a = eigenpairs_binary(f)
        b = eigenpairs_homotopy(f, rng=np.random.default_rng(seed))
        assert a.valid and b.valid
        assert matched_error(a.eigenvalues, b.eigenvalues) <= 1e-8


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_class_count_law(n, d):
    expected = count_classes(DistributionParams(n, d))
    good = 0
    for seed in range(100):
        f = random_system(n, d, seed)
        res = eigenpairs_homotopy(f, rng=np.random.default_rng(seed))
        if res.valid and res.count == expected:
            certified(res, f)
            good += 1
    assert good >= 99


def test_homotopy_n3_d2():
    for seed in range(20):
        f = random_system(3, 2, 500 + seed)
        res = eigenpairs_homotopy(f, rng=np.random.default_rng(seed))
        assert res.count == 7
        certified(res, f)


def test_homotopy_reports_failed_paths():
    # without Newton corrections no step is accepted, so every path must fail loudly
    f = random_system(2, 2, 3)
    cfg = TrackerConfig(max_newton=0)
    res = eigenpairs_homotopy(f, config=cfg, gamma=np.exp(0.3j))
    assert not res.valid
    assert any("failed" in m for m in res.messages)


def test_homotopy_rejects_d1():
    with pytest.raises(ValueError):
        eigenpairs_homotopy(HomogeneousSystem.from_matrix(np.eye(2)))


def test_solve_dispatch():
    A = sample_ginibre(3, SeededGenerator(5))
    assert matched_error(solve_eigenpairs(HomogeneousSystem.from_matrix(A)).eigenvalues, np.linalg.eigvals(A)) < 1e-9
    f = random_system(2, 3, 5)
    assert solve_eigenpairs(f).count == 4


def test_degenerate_binary_with_missing_top_term():
    # f_1 has no X_2^2 term, so the reduced polynomial drops a degree and (0, 1) is an eigenvector
    f1 = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0, (1, 1): 0.5})
    f2 = HomogeneousPoly.from_terms(2, 2, {(2, 0): 0.2, (1, 1): 1.0, (0, 2): 2.0})
    f = HomogeneousSystem.from_components([f1, f2])
    res = eigenpairs_binary(f)
    certified(res, f)
    assert has_class(res, [0, 1], 2.0, 2)


def test_class_set_json():
    res = eigenpairs_binary(HomogeneousSystem.power_system(2, 2))
    obj = res.to_json()
    assert obj["count"] == 3 and obj["valid"] is True
    assert len(obj["classes"][0]["v"]) == 2 and len(obj["classes"][0]["lambda"]) == 2


def test_oracle_error_is_runtime_error():
    assert issubclass(OracleError, RuntimeError)
