import numpy as np
import pytest

import fastcdf as fc


@pytest.fixture(scope="session")
def jit_warm():
    """Compile every jitted path once so timed tests measure algorithms,
    not compilation."""
    s = fc.generate_gaussian_sample(256, 2, 0)
    g = fc.build_grid_auto(s, [8, 8])
    bw = fc.Bandwidth.diag([0.5, 0.5])
    fc.ecdf_fastsum(s, g)
    fc.ecdf_naive(s, g.lattice())
    fc.ecdf_dnc(s)
    fc.kde_fastsum(s, g, fc.laplacian(), bw)
    fc.kde_naive(s, g.lattice(), fc.laplacian(), bw)
    fc.kde_dnc(s, fc.laplacian(), bw)
    s3 = fc.generate_gaussian_sample(256, 3, 0)
    fc.ecdf_dnc(s3)
    fc.kde_dnc(s3, fc.laplacian(), fc.Bandwidth.diag([0.5] * 3))
    return True


def rng_sample(seed, n, d, weights=None):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, d))
    w = None
    if weights == "uniform":
        w = rng.uniform(0.5, 2.0, n)
    elif weights == "integer":
        w = rng.integers(1, 5, n).astype(float)
    return fc.validate_sample(pts, w)
