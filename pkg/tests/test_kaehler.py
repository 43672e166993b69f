import numpy as np
import pytest

from _helpers import eps_family
from crrigidity.errors import EmptySampleSet, NotImmersion, NotInDomain, OutOfDomain
from crrigidity.kaehler import (
    HoloEmbedding,
    SpaceFormChart,
    Theorem12Outcome,
    conformal_factor_check,
    gauss_residual,
    kaehler_curvature,
    numeric_curvature,
    sample_hypersurface,
    second_fundamental_form,
    space_form_metric,
    theorem12_verdict,
    verify_map_into_sphere,
)
from crrigidity.tensors import bochner_tensor

VERONESE = HoloEmbedding(1, ({(1,): 1.0}, {(2,): 1.0}))


def linear_slice(n, N):
    return HoloEmbedding(n, tuple({tuple(np.eye(n, dtype=int)[i]): 1.0} for i in range(n)) + ({},) * (N - n))


def random_point(rng, dim, radius):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v) * radius * rng.uniform(0.1, 1.0)


def test_space_form_metrics(rng):
    z = random_point(rng, 3, 0.9)
    assert np.array_equal(SpaceFormChart(3, 0).metric(z), np.eye(3))
    assert np.array_equal(SpaceFormChart(3, -1).metric(np.zeros(3)), np.eye(3))
    assert space_form_metric(SpaceFormChart(1, 1), np.array([1.0]))[0, 0] == pytest.approx(0.25)
    with pytest.raises(OutOfDomain):
        SpaceFormChart(2, -1).metric(np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        SpaceFormChart(2, 2)


def test_space_form_curvature_examples():
    assert kaehler_curvature(SpaceFormChart(2, 0), np.zeros(2)).max_norm() == 0
    R = kaehler_curvature(SpaceFormChart(2, -1), np.zeros(2)).components
    d = np.eye(2)
    assert np.allclose(R, -(np.einsum("ij,kl->ijkl", d, d) + np.einsum("kj,il->ijkl", d, d)))
    assert R[0, 0, 0, 0] == pytest.approx(-2)
    assert kaehler_curvature(SpaceFormChart(2, 1), np.zeros(2)).components[0, 0, 0, 0] == pytest.approx(2)


@pytest.mark.parametrize("kappa", [-1, 0, 1])
def test_closed_curvature_matches_numeric(rng, kappa):
    for _ in range(50):
        dim = int(rng.integers(1, 5))
        chart = SpaceFormChart(dim, kappa)
        z = random_point(rng, dim, 0.8)
        closed = kaehler_curvature(chart, z)
        numeric = kaehler_curvature(chart, z, method="numeric")
        assert (closed - numeric).max_norm() <= 1e-6
        if dim >= 2:
            assert bochner_tensor(closed, chart.metric(z)).max_norm() <= 1e-8


def test_numeric_curvature_of_conformal_flat_metric():
    # g = (1 + 4|w|^2) on C has curvature -4 at the origin in this convention
    R = numeric_curvature(lambda w: np.array([[1 + 4 * abs(w[0]) ** 2]]), np.zeros(1))
    assert R.components[0, 0, 0, 0] == pytest.approx(-4.0, abs=1e-8)


def test_second_fundamental_form_examples():
    for kappa in (-1, 0, 1):
        sff = second_fundamental_form(linear_slice(2, 3), SpaceFormChart(3, kappa), np.array([0.1, -0.2j]))
        assert np.abs(sff.components).max() <= 1e-12
    for kappa in (0, -1):
        sff = second_fundamental_form(VERONESE, SpaceFormChart(2, kappa), np.zeros(1))
        assert sff.components.shape == (1, 1, 1)
        assert abs(sff.components[0, 0, 0]) == pytest.approx(2.0, abs=1e-10)
        assert sff.norm() == pytest.approx(2.0, abs=1e-10)


def test_second_fundamental_form_is_symmetric(rng):
    f = HoloEmbedding(2, ({(1, 0): 1.0}, {(0, 1): 1.0}, {(1, 1): 0.5, (2, 0): 0.3}))
    for kappa in (-1, 0, 1):
        for _ in range(10):
            sff = second_fundamental_form(f, SpaceFormChart(3, kappa), random_point(rng, 2, 0.3))
            assert sff.symmetry_defect() <= 1e-12


def test_gauss_equation_examples():
    res = gauss_residual(linear_slice(2, 3), SpaceFormChart(3, -1), np.array([0.2, 0.1j]))
    assert res.max_norm() <= 1e-8
    assert gauss_residual(VERONESE, SpaceFormChart(2, 0), np.zeros(1)).max_norm() <= 1e-8
    assert gauss_residual(VERONESE, SpaceFormChart(2, 0), np.array([0.3])).max_norm() <= 1e-6


def test_gauss_equation_random_points(rng):
    examples = [
        (linear_slice(2, 3), 2),
        (VERONESE, 1),
        (HoloEmbedding(2, ({(1, 0): 1.0}, {(0, 1): 1.0}, {(1, 1): 1.0})), 2),
    ]
    for f, n in examples:
        for kappa in (-1, 0, 1):
            chart = SpaceFormChart(f.N, kappa)
            for _ in range(20):
                z = random_point(rng, n, 0.4)
                assert gauss_residual(f, chart, z).max_norm() <= 1e-6


def test_conformal_factor_examples(rng):
    samples = [random_point(rng, 2, 0.5) for _ in range(5)]
    fit = conformal_factor_check(linear_slice(2, 2), SpaceFormChart(2, -1), SpaceFormChart(2, -1), samples)
    assert fit.k == pytest.approx(1.0) and fit.deviation <= 1e-12
    scaled = HoloEmbedding(1, ({(1,): 2.0}, {}))
    pts = [np.array([0.1]), np.array([0.3j])]
    fit = conformal_factor_check(scaled, SpaceFormChart(1, 0), SpaceFormChart(2, 0), pts)
    assert fit.k == pytest.approx(4.0) and fit.deviation <= 1e-12
    fit = conformal_factor_check(VERONESE, SpaceFormChart(1, 0), SpaceFormChart(2, 0), pts)
    assert fit.deviation > 0.1 and not fit.conformal
    with pytest.raises(EmptySampleSet):
        conformal_factor_check(VERONESE, SpaceFormChart(1, 0), SpaceFormChart(2, 0), pts[:1])


def test_theorem12_examples(rng):
    samples = [random_point(rng, 2, 0.5) for _ in range(5)]
    out = theorem12_verdict(linear_slice(2, 3), SpaceFormChart(3, -1), SpaceFormChart(2, -1), samples)
    assert out.verdict is Theorem12Outcome.TOTALLY_GEODESIC_CONFIRMED
    product = HoloEmbedding(2, ({(1, 0): 1.0}, {(0, 1): 1.0}, {(1, 1): 1.0}))
    out = theorem12_verdict(product, SpaceFormChart(3, 0), SpaceFormChart(2, 0), samples)
    assert out.verdict is Theorem12Outcome.HYPOTHESIS_FAILS
    assert "conformal" in out.reason
    out = theorem12_verdict(VERONESE, SpaceFormChart(2, 0), SpaceFormChart(1, 0), [np.array([0.1]), np.array([0.2])])
    assert out.verdict is Theorem12Outcome.HYPOTHESIS_FAILS
    assert "window" in out.reason


def test_theorem12_regression(rng):
    # every passing example must have vanishing second fundamental form
    for n, N in [(2, 2), (2, 3), (3, 4), (3, 5)]:
        for kappa in (-1, 0, 1):
            samples = [random_point(rng, n, 0.5) for _ in range(4)]
            out = theorem12_verdict(linear_slice(n, N), SpaceFormChart(N, kappa), SpaceFormChart(n, kappa), samples)
            assert out.verdict is Theorem12Outcome.TOTALLY_GEODESIC_CONFIRMED
            assert out.details["max_second_fundamental_form"] <= 1e-8


def test_not_immersion():
    f = HoloEmbedding(1, ({(2,): 1.0}, {(3,): 1.0}))
    with pytest.raises(NotImmersion):
        second_fundamental_form(f, SpaceFormChart(2, 0), np.zeros(1))


def test_sphere_map_example():
    q = eps_family(0.25)
    h = np.eye(1)
    F = HoloEmbedding(2, ({(1, 0): 1.0}, {(0, 1): 1.0}, {(0, 2): 0.5}))
    w = np.sqrt(0.8)
    pts = sample_hypersurface(q, h, [w])
    assert abs(pts[0][0]) ** 2 == pytest.approx(0.04)
    assert verify_map_into_sphere(q, h, F, pts) <= 1e-15
    bad = HoloEmbedding(2, ({(1, 0): 1.0}, {(0, 1): 1.0}, {(0, 2): 0.6}))
    assert verify_map_into_sphere(q, h, bad, pts) > 0.05
    flat = HoloEmbedding(2, ({(1, 0): 1.0}, {(0, 1): 1.0}, {}))
    assert verify_map_into_sphere(eps_family(0.0), h, flat, sample_hypersurface(eps_family(0.0), h, [0.3j])) <= 1e-15
    with pytest.raises(NotInDomain):
        sample_hypersurface(q, h, [1.5])
