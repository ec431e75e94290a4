"""Fast exact multivariate empirical CDF/survival functions and kernel
density estimation: lexicographic fast-sum sweeps on rectilinear grids and
divide-and-conquer dominance recursion at the sample points, with
brute-force oracles, a kernel toolkit and multilinear interpolation."""

from .core import (
    Bandwidth,
    DeltaVector,
    DegenerateRangeError,
    EvalResult,
    OverflowGuardError,
    ParameterError,
    RectilinearGrid,
    Sample,
    ShapeError,
    TieError,
    ValidationError,
    all_deltas,
    build_grid_auto,
    generate_gaussian_sample,
    read_sample_csv,
    validate_sample,
    write_sample_csv,
)
from .dnc import DeltaTermTable, ecdf_dnc, kde_dnc, kde_terms_dnc, rank_tiebreak
from .fastsum import (
    CumulativeTensor,
    directional_sweep,
    ecdf_fastsum,
    esf_fastsum,
    kde_fastsum,
    read_result_csv,
    write_result_csv,
)
from .histogram import (
    LocalSumTensor,
    local_sums,
    local_sums_sorted,
    local_sums_uniform,
)
from .interp import multilinear_interp
from .kernels import (
    KernelSpec,
    bandwidth_rotation,
    beta_kernel,
    eval_kernel,
    fourth_order_laplacian,
    gaussian,
    gaussian_matching_bandwidth,
    kernel_moment,
    kernel_profile,
    kernel_square_integral,
    laplacian,
    matern32_additive,
    matern32_product,
    matern_coefficients,
    parse_kernel_spec,
    polyexp_kernel,
    polyexp_normalizer,
    uniform,
)
from .naive import ecdf_naive, esf_naive, kde_naive

__version__ = "0.1.0"
