import numpy as np
import pytest

import fastcdf as fc

THREE_POINTS = [[0.2, 0.7], [0.5, 0.1], [0.9, 0.9]]


def test_ecdf_naive_hand_examples():
    s = fc.validate_sample(THREE_POINTS)
    assert np.isclose(
        fc.ecdf_naive(s, [[0.5, 0.8]]).values[0], 2 / 3)
    assert np.isclose(
        fc.ecdf_naive(s, [[0.5, 0.8]], fc.DeltaVector((-1, -1))).values[0],
        1 / 3)
    assert fc.ecdf_naive(s, [[-10.0, -10.0]]).values[0] == 0.0


def test_ecdf_naive_full_orthant_is_one():
    rng = np.random.default_rng(1)
    s = fc.validate_sample(rng.standard_normal((100, 3)))
    assert fc.ecdf_naive(s, [[np.finfo(float).max] * 3]).values[0] == 1.0


def test_ecdf_naive_exclude_self():
    s = fc.validate_sample(THREE_POINTS)
    with_self = fc.ecdf_naive(s, s.points, scaled=False).values
    without = fc.ecdf_naive(s, s.points, exclude_self=True, scaled=False).values
    np.testing.assert_array_equal(with_self - without, np.ones(3))


def test_esf_identity_against_direct_survival():
    # reflection identity vs a direct transliteration of the survival sum
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 60))
        d = int(rng.integers(1, 4))
        pts = rng.standard_normal((n, d))
        w = rng.uniform(0.5, 2.0, n)
        s = fc.validate_sample(pts, w)
        queries = rng.standard_normal((8, d))
        got = fc.esf_naive(s, queries).values
        direct = np.array([
            w[np.all(pts > z, axis=1)].sum() / n for z in queries
        ])
        np.testing.assert_allclose(got, direct, atol=1e-15)


def test_kde_naive_hand_examples():
    s = fc.validate_sample([[0.0]])
    bw = fc.Bandwidth.diag([1.0])
    assert np.isclose(
        fc.kde_naive(s, [[1.0]], fc.laplacian(), bw).values[0],
        0.5 * np.exp(-1.0))
    s2 = fc.validate_sample([[0.0], [1.0]])
    assert np.isclose(
        fc.kde_naive(s2, [[0.0]], fc.laplacian(), bw).values[0],
        0.25 * (1 + np.exp(-1.0)))
    assert fc.kde_naive(s, [[1.5]], fc.uniform(), bw).values[0] == 0.0


def test_kde_naive_nonnegative_for_nonnegative_kernels():
    rng = np.random.default_rng(4)
    s = fc.validate_sample(rng.standard_normal((50, 2)), rng.uniform(0, 2, 50))
    q = rng.standard_normal((20, 2))
    bw = fc.Bandwidth.diag([0.4, 0.6])
    for spec in (fc.laplacian(), fc.uniform(), fc.beta_kernel(2),
                 fc.matern_coefficients(1), fc.matern32_additive(),
                 fc.matern32_product()):
        assert np.all(fc.kde_naive(s, q, spec, bw).values >= 0.0)


def test_kde_naive_fourth_order_takes_negative_values():
    s = fc.validate_sample([[0.0]])
    bw = fc.Bandwidth.diag([1.0])
    vals = fc.kde_naive(s, [[5.0]], fc.fourth_order_laplacian("b"), bw).values
    assert vals[0] < 0.0


def test_kde_naive_matches_eval_kernel_sum():
    # cross-check the jitted profiles against the reference evaluator
    rng = np.random.default_rng(9)
    pts = rng.standard_normal((40, 2))
    w = rng.uniform(0.5, 2.0, 40)
    s = fc.validate_sample(pts, w)
    q = rng.standard_normal((10, 2))
    h = np.array([0.7, 1.3])
    for spec in (fc.laplacian(), fc.uniform(), fc.gaussian(),
                 fc.beta_kernel(2), fc.matern_coefficients(2),
                 fc.matern32_additive(), fc.matern32_product(),
                 fc.fourth_order_laplacian("a"),
                 fc.fourth_order_laplacian("c"),
                 fc.polyexp_kernel(2.0, (1.0, 1.0))):
        got = fc.kde_naive(s, q, spec, fc.Bandwidth.diag(h)).values
        ref = np.array([
            sum(w[i] * fc.eval_kernel(spec, (pts[i] - z) / h)
                for i in range(40)) / (40 * h.prod())
            for z in q
        ])
        np.testing.assert_allclose(got, ref, atol=1e-14)


def test_ecdf_naive_dimension_mismatch():
    s = fc.validate_sample(THREE_POINTS)
    with pytest.raises(fc.ShapeError):
        fc.ecdf_naive(s, [[0.5, 0.5, 0.5]])
    with pytest.raises(fc.ParameterError):
        fc.ecdf_naive(s, [[0.5, 0.5]], fc.DeltaVector((1,)))
