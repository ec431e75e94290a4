"""Local sums over grid cells: the generalized multivariate histogram.

Bin layout per dimension k (0-based bin index b, knots z_0 < ... < z_{M-1},
with conceptual sentinels -inf and +inf at both ends):

* non-strict convention (delta_k = +1): bin b holds z_{b-1} <  x <= z_b,
  i.e. b counts the knots strictly below x;
* strict convention (delta_k = -1): bin b holds z_{b-1} <= x <  z_b,
  i.e. b counts the knots at or below x.

The half-open side flips with delta so that a plain prefix sum over bins
reproduces the strict/non-strict inequality semantics exactly for points
sitting on knots.  Tensors store raw (unscaled) sums; the single division by
N happens at final output, which keeps integer-weight paths free of rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import DeltaVector, ParameterError, RectilinearGrid, Sample


@dataclass(frozen=True)
class LocalSumTensor:
    """Dense (M_1+1) x ... x (M_d+1) tensor of per-cell weight sums, stored in
    lexicographic order with the last dimension contiguous."""

    data: np.ndarray
    scaled: bool = False

    @property
    def dims(self) -> tuple[int, ...]:
        return self.data.shape

    def total(self) -> float:
        return float(self.data.sum())


@njit(cache=True)
def _scan_bins_sorted(values, order, knots, closed_right, out):
    # Walk data in ascending order against the knot ladder: linear after sort.
    m = knots.shape[0]
    g = 0
    for t in range(order.shape[0]):
        i = order[t]
        x = values[i]
        if closed_right:
            while g < m and knots[g] < x:
                g += 1
        else:
            while g < m and knots[g] <= x:
                g += 1
        out[i] = g


@njit(cache=True)
def _flat_bins_uniform(points, z0, dz, msize, closed_right, knots_flat,
                       offsets, out):
    # Fused per-point flat cell index over all dimensions: one pass over the
    # row-major point matrix, no (d, N) intermediate.
    n, d = points.shape
    for i in range(n):
        flat = 0
        for k in range(d):
            x = points[i, k]
            t = (x - z0[k]) / dz[k]
            m = msize[k]
            if closed_right[k]:
                b = int(np.ceil(t))
            else:
                b = int(np.floor(t)) + 1
            if b < 0:
                b = 0
            elif b > m:
                b = m
            base = offsets[k]
            if closed_right[k]:
                while b > 0 and x <= knots_flat[base + b - 1]:
                    b -= 1
                while b < m and x > knots_flat[base + b]:
                    b += 1
            else:
                while b > 0 and x < knots_flat[base + b - 1]:
                    b -= 1
                while b < m and x >= knots_flat[base + b]:
                    b += 1
            flat = flat * (m + 1) + b
        out[i] = flat


@njit(cache=True)
def _scan_bins_uniform(values, z0, dz, m, closed_right, knots, out):
    for i in range(values.shape[0]):
        t = (values[i] - z0) / dz
        if closed_right:
            b = int(np.ceil(t))
        else:
            b = int(np.floor(t)) + 1
        if b < 0:
            b = 0
        elif b > m:
            b = m
        # The mesh-division formula can land one bin off when x sits exactly
        # on a knot (floating division); nudge to the binning convention.
        if closed_right:
            while b > 0 and values[i] <= knots[b - 1]:
                b -= 1
            while b < m and values[i] > knots[b]:
                b += 1
        else:
            while b > 0 and values[i] < knots[b - 1]:
                b -= 1
            while b < m and values[i] >= knots[b]:
                b += 1
        out[i] = b


def index_matrix_sorted(sample: Sample, grid: RectilinearGrid,
                        delta: DeltaVector) -> np.ndarray:
    """Per-point bin indices, (d, N) int64, entries in {0, ..., M_k}, computed
    by independent sorting in each dimension (O(N log N + M))."""
    _check_dims(sample, grid, delta)
    d, n = sample.dim, sample.count
    idx = np.empty((d, n), dtype=np.int64)
    for k in range(d):
        col = sample.points[:, k]
        order = np.argsort(col, kind="stable")
        _scan_bins_sorted(col, order, grid.knots[k], delta.signs[k] > 0, idx[k])
    return idx


def index_matrix_uniform(sample: Sample, grid: RectilinearGrid,
                         delta: DeltaVector) -> np.ndarray:
    """Per-point bin indices by constant mesh division (O(N)); requires a
    uniform grid in every dimension."""
    _check_dims(sample, grid, delta)
    if not grid.is_uniform:
        raise ParameterError("mesh-division binning requires a uniform grid")
    d, n = sample.dim, sample.count
    idx = np.empty((d, n), dtype=np.int64)
    for k in range(d):
        knots = grid.knots[k]
        dz = grid.mesh[k] if knots.size > 1 else 1.0
        _scan_bins_uniform(sample.points[:, k], knots[0], dz, knots.size,
                           delta.signs[k] > 0, knots, idx[k])
    return idx


def flat_bin_indices(sample: Sample, grid: RectilinearGrid,
                     delta: DeltaVector) -> np.ndarray:
    """Flat (row-major) cell index per point, one fused pass on uniform
    grids, falling back to the per-dimension sorted scan otherwise."""
    _check_dims(sample, grid, delta)
    if grid.is_uniform:
        d = sample.dim
        z0 = np.array([z[0] for z in grid.knots])
        dz = np.array([grid.mesh[k] if grid.knots[k].size > 1 else 1.0
                       for k in range(d)])
        msize = np.array([z.size for z in grid.knots], dtype=np.int64)
        closed = np.array([s > 0 for s in delta.signs], dtype=np.bool_)
        knots_flat = np.concatenate(grid.knots)
        offsets = np.zeros(d, dtype=np.int64)
        np.cumsum(msize[:-1], out=offsets[1:])
        out = np.empty(sample.count, dtype=np.int64)
        _flat_bins_uniform(sample.points, z0, dz, msize, closed, knots_flat,
                           offsets, out)
        return out
    idx = index_matrix_sorted(sample, grid, delta)
    dims = tuple(m + 1 for m in grid.shape)
    return np.ravel_multi_index(tuple(idx), dims)


def scatter_flat(flat: np.ndarray, weights: np.ndarray,
                 dims: tuple[int, ...]) -> np.ndarray:
    """Accumulate one weight channel into the dense cell tensor."""
    data = np.bincount(flat, weights=weights, minlength=int(np.prod(dims)))
    return data.reshape(dims)


def scatter_local_sums(index: np.ndarray, weights: np.ndarray,
                       dims: tuple[int, ...]) -> np.ndarray:
    """Accumulate weights into the dense cell tensor for one weight channel."""
    flat = np.ravel_multi_index(tuple(index), dims)
    return scatter_flat(flat, weights, dims)


def local_sums_sorted(sample: Sample, grid: RectilinearGrid,
                      delta: DeltaVector | None = None) -> LocalSumTensor:
    """Local sums by per-dimension sorting; unscaled raw weight sums."""
    delta = delta or DeltaVector.ones(sample.dim)
    idx = index_matrix_sorted(sample, grid, delta)
    dims = tuple(m + 1 for m in grid.shape)
    return LocalSumTensor(scatter_local_sums(idx, sample.weights, dims))


def local_sums_uniform(sample: Sample, grid: RectilinearGrid,
                       delta: DeltaVector | None = None) -> LocalSumTensor:
    """Local sums by uniform mesh division; identical output to
    :func:`local_sums_sorted` on the same inputs."""
    delta = delta or DeltaVector.ones(sample.dim)
    if not grid.is_uniform:
        raise ParameterError("mesh-division binning requires a uniform grid")
    flat = flat_bin_indices(sample, grid, delta)
    dims = tuple(m + 1 for m in grid.shape)
    return LocalSumTensor(scatter_flat(flat, sample.weights, dims))


def local_sums(sample: Sample, grid: RectilinearGrid,
               delta: DeltaVector | None = None) -> LocalSumTensor:
    """Dispatch to the O(N) uniform-mesh path when the grid allows it."""
    if grid.is_uniform:
        return local_sums_uniform(sample, grid, delta)
    return local_sums_sorted(sample, grid, delta)


def _check_dims(sample: Sample, grid: RectilinearGrid, delta: DeltaVector):
    if grid.dim != sample.dim or delta.dim != sample.dim:
        raise ParameterError(
            f"dimension mismatch: sample d={sample.dim}, grid d={grid.dim}, "
            f"delta d={delta.dim}"
        )
