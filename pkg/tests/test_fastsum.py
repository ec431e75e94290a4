import numpy as np
import pytest

import fastcdf as fc
from fastcdf.fastsum import directional_sweep
from fastcdf.histogram import LocalSumTensor

THREE_POINTS = [[0.2, 0.7], [0.5, 0.1], [0.9, 0.9]]


def knot_grid(*vecs):
    return fc.RectilinearGrid.from_knots([np.asarray(v, dtype=float) for v in vecs])


def test_directional_sweep_prefix():
    t = LocalSumTensor(np.array([[1.0, 1.0], [0.0, 1.0]]))
    out = directional_sweep(t, fc.DeltaVector((1, 1)))
    np.testing.assert_array_equal(out.data, [[1.0, 2.0], [1.0, 3.0]])


def test_directional_sweep_suffix():
    t = LocalSumTensor(np.array([[1.0, 1.0], [0.0, 1.0]]))
    out = directional_sweep(t, fc.DeltaVector((-1, -1)))
    np.testing.assert_array_equal(out.data, [[3.0, 2.0], [1.0, 1.0]])


@pytest.mark.parametrize("code", range(8))
def test_directional_sweep_terminal_corner_is_total(code):
    rng = np.random.default_rng(code)
    t = LocalSumTensor(rng.random((3, 4, 5)))
    delta = fc.DeltaVector.from_code(code, 3)
    out = directional_sweep(t, delta)
    corner = tuple(-1 if s > 0 else 0 for s in delta.signs)
    assert np.isclose(out.data[corner], t.data.sum())


def test_directional_sweep_monotone_for_nonnegative_weights():
    rng = np.random.default_rng(21)
    t = LocalSumTensor(rng.random((4, 5, 3)))
    out = directional_sweep(t, fc.DeltaVector.ones(3)).data
    for ax in range(3):
        assert np.all(np.diff(out, axis=ax) >= 0)


def test_directional_sweep_does_not_mutate_input():
    data = np.arange(6.0).reshape(2, 3)
    t = LocalSumTensor(data.copy())
    directional_sweep(t, fc.DeltaVector((1, 1)))
    np.testing.assert_array_equal(t.data, data)


def test_ecdf_fastsum_hand_example():
    s = fc.validate_sample(THREE_POINTS)
    g = knot_grid([0.5, 0.9], [0.5, 0.9])
    vals = fc.ecdf_fastsum(s, g).values
    np.testing.assert_allclose(vals, [1 / 3, 2 / 3, 1 / 3, 1.0])


def test_ecdf_fastsum_strict_hand_example():
    s = fc.validate_sample(THREE_POINTS)
    g = knot_grid([0.5, 0.9], [0.5, 0.9])
    vals = fc.ecdf_fastsum(s, g, fc.DeltaVector((-1, -1))).values
    assert vals[0] == 0.0  # (0.5, 0.1) fails the strict x1 < 0.5 test


def test_ecdf_fastsum_grid_below_data_is_zero():
    s = fc.validate_sample(THREE_POINTS)
    g = knot_grid([-2.0, -1.0], [-2.0, -1.0])
    np.testing.assert_array_equal(fc.ecdf_fastsum(s, g).values, np.zeros(4))


def test_esf_fastsum_hand_example():
    s = fc.validate_sample(THREE_POINTS)
    assert np.isclose(fc.esf_fastsum(s, knot_grid([0.4], [0.4])).values[0], 1 / 3)
    assert fc.esf_fastsum(s, knot_grid([2.0], [2.0])).values[0] == 0.0
    assert fc.esf_fastsum(s, knot_grid([-1.0], [-1.0])).values[0] == 1.0


def test_esf_matches_naive_survival():
    rng = np.random.default_rng(4)
    s = fc.validate_sample(rng.standard_normal((300, 2)), rng.uniform(0.5, 2, 300))
    g = fc.build_grid_auto(s, [7, 9])
    a = fc.esf_fastsum(s, g).values
    b = fc.esf_naive(s, g.lattice()).values
    np.testing.assert_allclose(a, b, atol=1e-14)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_ecdf_fastsum_bit_exact_integer_counts(d):
    # unscaled counts equal the oracle's exactly, every delta orientation
    for seed in range(20):
        rng = np.random.default_rng(1000 * d + seed)
        n = int(rng.integers(2, 400))
        s = fc.validate_sample(rng.standard_normal((n, d)),
                               rng.integers(1, 5, n).astype(float))
        counts = [int(c) for c in rng.integers(2, 5, d)]
        g = fc.build_grid_auto(s, counts)
        delta = fc.DeltaVector(tuple(rng.choice([-1, 1], d).tolist()))
        a = fc.ecdf_fastsum(s, g, delta, scaled=False).values
        b = fc.ecdf_naive(s, g.lattice(), delta, scaled=False).values
        np.testing.assert_array_equal(a, b)


def test_ecdf_monotone_along_axes():
    rng = np.random.default_rng(11)
    s = fc.validate_sample(rng.standard_normal((500, 2)), rng.uniform(0, 2, 500))
    g = fc.build_grid_auto(s, [12, 15])
    cube = fc.ecdf_fastsum(s, g).values.reshape(g.shape)
    assert np.all(np.diff(cube, axis=0) >= 0)
    assert np.all(np.diff(cube, axis=1) >= 0)
    assert cube.max() <= s.weights.sum() / s.count + 1e-15
    assert np.isclose(cube[-1, -1], s.weights.sum() / s.count)


def test_kde_fastsum_laplacian_single_point_1d():
    s = fc.validate_sample([[0.0]])
    g = knot_grid([-1.0, 1.0])
    vals = fc.kde_fastsum(s, g, fc.laplacian(), fc.Bandwidth.diag([1.0])).values
    np.testing.assert_allclose(vals, 0.5 * np.exp(-1.0))


def test_kde_fastsum_laplacian_single_point_2d():
    s = fc.validate_sample([[0.0, 0.0]])
    g = knot_grid([0.0, 1.0], [0.0, 1.0])
    vals = fc.kde_fastsum(s, g, fc.laplacian(),
                          fc.Bandwidth.diag([1.0, 1.0])).values
    assert np.isclose(vals[-1], 0.25 * np.exp(-2.0))
    assert np.isclose(vals[0], 0.25)


def test_kde_fastsum_uniform_single_point():
    s = fc.validate_sample([[0.0]])
    g = knot_grid([0.5, 1.5])
    vals = fc.kde_fastsum(s, g, fc.uniform(), fc.Bandwidth.diag([1.0])).values
    np.testing.assert_array_equal(vals, [0.5, 0.0])


@pytest.mark.parametrize("family", ["laplacian", "uniform", "matern32-additive"])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_kde_fastsum_matches_naive(family, d):
    rng = np.random.default_rng(d * 31)
    s = fc.validate_sample(rng.standard_normal((500, d)),
                           rng.uniform(0.5, 2.0, 500))
    g = fc.build_grid_auto(s, [max(2, round(500 ** (1 / d)))] * d)
    bw = fc.Bandwidth.diag(rng.uniform(0.2, 0.6, d))
    spec = fc.parse_kernel_spec(family)
    a = fc.kde_fastsum(s, g, spec, bw).values
    b = fc.kde_naive(s, g.lattice(), spec, bw).values
    assert np.max(np.abs(a - b)) <= 1e-13


@pytest.mark.parametrize("family", ["laplacian", "matern32-additive"])
def test_kde_fastsum_exact_with_points_on_knots(family):
    # continuous kernels stay exact when data sits exactly on grid knots
    rng = np.random.default_rng(8)
    lattice = np.linspace(-1.0, 1.0, 11)
    pts = np.column_stack([rng.choice(lattice, 300), rng.choice(lattice, 300)])
    s = fc.validate_sample(pts, rng.uniform(0.5, 2.0, 300))
    g = knot_grid(lattice[::2], lattice[1::3])
    bw = fc.Bandwidth.diag([0.25, 0.4])
    spec = fc.parse_kernel_spec(family)
    a = fc.kde_fastsum(s, g, spec, bw).values
    b = fc.kde_naive(s, g.lattice(), spec, bw).values
    assert np.max(np.abs(a - b)) <= 1e-13


def test_kde_fastsum_overflow_guard_names_dimension():
    rng = np.random.default_rng(3)
    s = fc.validate_sample(np.column_stack([rng.uniform(0, 1, 50),
                                            rng.uniform(0, 700, 50)]))
    g = fc.build_grid_auto(s, [4, 4])
    with pytest.raises(fc.OverflowGuardError, match="dimension 1"):
        fc.kde_fastsum(s, g, fc.laplacian(), fc.Bandwidth.diag([1.0, 1.0]))


def test_kde_fastsum_rejects_unsupported_family():
    s = fc.validate_sample([[0.0], [1.0]])
    g = knot_grid([0.0, 1.0])
    with pytest.raises(fc.ParameterError):
        fc.kde_fastsum(s, g, fc.gaussian(), fc.Bandwidth.diag([1.0]))


def test_kde_fastsum_rejects_matrix_bandwidth():
    s = fc.validate_sample([[0.0, 0.0], [1.0, 1.0]])
    g = knot_grid([0.0, 1.0], [0.0, 1.0])
    with pytest.raises(fc.ParameterError):
        fc.kde_fastsum(s, g, fc.laplacian(), fc.Bandwidth.full(np.eye(2)))


def test_result_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(5)
    coords = rng.standard_normal((7, 2))
    values = rng.standard_normal(7)
    path = tmp_path / "r.csv"
    fc.write_result_csv(coords, values, path)
    assert path.read_text().splitlines()[0] == "z1,z2,value"
    c, v = fc.read_result_csv(path)
    np.testing.assert_array_equal(c, coords)
    np.testing.assert_array_equal(v, values)
