"""Domain types shared by every algorithm: weighted samples, rectilinear
evaluation grids, inequality sign vectors, bandwidths and result containers,
plus deterministic sample generation and CSV I/O.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

GRID_ALIGNED = "grid"
POINT_ALIGNED = "points"

# Largest tolerated per-dimension data-span / bandwidth ratio for the
# exponential-kernel fast paths.  After midrange centering the individual
# exponent factors stay within +-span/(2h), so 600 keeps them inside the
# comfortable double range (exp(300) ~ 2e130).
EXP_OVERFLOW_GUARD = 600.0


class ValidationError(ValueError):
    """Input data violates a structural contract (non-finite entries, ...)."""


class ShapeError(ValidationError):
    """Array dimensions do not line up."""


class ParameterError(ValueError):
    """A scalar/option argument is outside its admissible range."""


class DegenerateRangeError(ParameterError):
    """A dimension has zero data range, so no grid can be built over it."""


class TieError(ValueError):
    """Duplicate per-dimension coordinates where distinct ones are required."""


class OverflowGuardError(ValueError):
    """Data span / bandwidth ratio too large for the exponential fast path."""


@dataclass(frozen=True)
class Sample:
    """Weighted point cloud: ``points[i]`` in R^d with weight ``weights[i]``.

    The weight vector plays the role of the response values in generalized
    ECDF sums and of the kernel weights in KDE sums; the calling operation
    decides which.  ``distinct_by_dim[k]`` records whether the N coordinates
    in dimension k are pairwise distinct (required by the divide-and-conquer
    routines).
    """

    points: np.ndarray
    weights: np.ndarray
    distinct_by_dim: tuple[bool, ...]

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def distinct(self) -> bool:
        return all(self.distinct_by_dim)


@dataclass(frozen=True)
class RectilinearGrid:
    """Cartesian product of per-dimension strictly increasing knot vectors.

    ``uniform[k]`` flags an equispaced knot vector with mesh width
    ``mesh[k]``.  The conceptual sentinels z_{k,0} = -inf and
    z_{k,M_k+1} = +inf are never stored.
    """

    knots: tuple[np.ndarray, ...]
    uniform: tuple[bool, ...]
    mesh: tuple[float, ...]

    def __post_init__(self):
        for k, z in enumerate(self.knots):
            if z.ndim != 1 or z.size < 1:
                raise ShapeError(f"knot vector {k} must be a non-empty 1-d array")
            if not np.all(np.isfinite(z)):
                raise ValidationError(f"knot vector {k} contains non-finite values")
            if z.size > 1 and not np.all(np.diff(z) > 0):
                raise ValidationError(f"knot vector {k} is not strictly increasing")

    @classmethod
    def from_knots(cls, knots) -> "RectilinearGrid":
        """Build a grid from raw knot vectors, detecting uniform meshes."""
        arrs = tuple(np.ascontiguousarray(z, dtype=np.float64) for z in knots)
        uniform = []
        mesh = []
        for z in arrs:
            if z.size < 2:
                uniform.append(True)
                mesh.append(0.0)
                continue
            dz = np.diff(z)
            step = float(dz[0])
            uniform.append(bool(np.all(np.abs(dz - step) <= 1e-12 * abs(step))))
            mesh.append(step)
        return cls(arrs, tuple(uniform), tuple(mesh))

    @property
    def dim(self) -> int:
        return len(self.knots)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(z.size for z in self.knots)

    @property
    def size(self) -> int:
        return int(np.prod([z.size for z in self.knots]))

    @property
    def is_uniform(self) -> bool:
        return all(self.uniform)

    def shifted(self, offsets) -> "RectilinearGrid":
        """Translate every knot vector; mesh widths and flags carry over."""
        knots = tuple(z + float(c) for z, c in zip(self.knots, offsets))
        return RectilinearGrid(knots, self.uniform, self.mesh)

    def lattice(self) -> np.ndarray:
        """All grid points as an (M, d) matrix in lexicographic order
        (last dimension fastest-varying)."""
        mesh = np.meshgrid(*self.knots, indexing="ij")
        return np.column_stack([m.ravel(order="C") for m in mesh])


@dataclass(frozen=True)
class DeltaVector:
    """Sign vector selecting per-dimension inequality strictness.

    +1 selects the non-strict comparison (<=), -1 the strict one (<).
    """

    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) == 0 or any(s not in (-1, 1) for s in self.signs):
            raise ParameterError("delta entries must be -1 or +1")

    @classmethod
    def ones(cls, dim: int) -> "DeltaVector":
        return cls((1,) * dim)

    @classmethod
    def minus_ones(cls, dim: int) -> "DeltaVector":
        return cls((-1,) * dim)

    @classmethod
    def from_code(cls, code: int, dim: int) -> "DeltaVector":
        """Decode a bit pattern: bit k set means dimension k is strict (-1)."""
        return cls(tuple(-1 if (code >> k) & 1 else 1 for k in range(dim)))

    @property
    def code(self) -> int:
        return sum(1 << k for k, s in enumerate(self.signs) if s < 0)

    @property
    def dim(self) -> int:
        return len(self.signs)

    @property
    def parity(self) -> int:
        return int(np.prod(self.signs))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=np.float64)


def all_deltas(dim: int) -> Iterator[DeltaVector]:
    """All 2^d sign vectors in the fixed code order (code 0 = all +1)."""
    for code in range(1 << dim):
        yield DeltaVector.from_code(code, dim)


@dataclass(frozen=True)
class Bandwidth:
    """Diagonal per-dimension bandwidth h_k > 0, or a full symmetric
    positive-definite matrix (reduced to diagonal form by rotation)."""

    diagonal: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.diagonal is None) == (self.matrix is None):
            raise ParameterError("set exactly one of diagonal or matrix bandwidth")
        if self.diagonal is not None:
            h = self.diagonal
            if h.ndim != 1 or not np.all(np.isfinite(h)) or not np.all(h > 0):
                raise ParameterError("diagonal bandwidth must be finite and > 0")
        else:
            H = self.matrix
            if H.ndim != 2 or H.shape[0] != H.shape[1]:
                raise ShapeError("matrix bandwidth must be square")
            if not np.all(np.isfinite(H)):
                raise ValidationError("matrix bandwidth contains non-finite values")

    @classmethod
    def diag(cls, h) -> "Bandwidth":
        return cls(diagonal=np.ascontiguousarray(h, dtype=np.float64))

    @classmethod
    def full(cls, H) -> "Bandwidth":
        return cls(matrix=np.ascontiguousarray(H, dtype=np.float64))

    @property
    def is_diagonal(self) -> bool:
        return self.diagonal is not None

    @property
    def dim(self) -> int:
        return self.diagonal.size if self.is_diagonal else self.matrix.shape[0]


@dataclass
class EvalResult:
    """Evaluation values aligned either to a grid (lexicographic order, last
    dimension fastest) or to the sample/query points (input order)."""

    values: np.ndarray
    alignment: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.alignment not in (GRID_ALIGNED, POINT_ALIGNED):
            raise ParameterError(f"unknown alignment {self.alignment!r}")


def validate_sample(points, weights=None) -> Sample:
    """Validate raw arrays into a :class:`Sample`.

    Parameters
    ----------
    points : array_like, shape (N, d)
        Coordinates; a 1-d array is treated as a single dimension.
    weights : array_like, shape (N,), optional
        Defaults to unit weights.

    Raises
    ------
    ValidationError
        On non-finite entries.
    ShapeError
        On empty input or weight length mismatch.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
        raise ShapeError("points must be a non-empty (N, d) matrix")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("points contain non-finite values")
    n = pts.shape[0]
    if weights is None:
        w = np.ones(n, dtype=np.float64)
    else:
        w = np.ascontiguousarray(weights, dtype=np.float64)
        if w.shape != (n,):
            raise ShapeError(f"weights must have shape ({n},), got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weights contain non-finite values")
    distinct = []
    for k in range(pts.shape[1]):
        col = np.sort(pts[:, k])
        distinct.append(bool(n == 1 or np.all(col[1:] > col[:-1])))
    return Sample(pts, w, tuple(distinct))


def build_grid_auto(sample: Sample, counts) -> RectilinearGrid:
    """Uniform evaluation grid covering the sample, ``counts[k]`` knots per
    dimension; the first and last knots equal the per-dimension data min and
    max exactly.
    """
    counts = [int(c) for c in np.atleast_1d(counts)]
    if len(counts) != sample.dim:
        raise ParameterError(
            f"need {sample.dim} knot counts, got {len(counts)}"
        )
    knots = []
    mesh = []
    for k, m in enumerate(counts):
        if m < 2:
            raise ParameterError(f"dimension {k}: knot count must be >= 2, got {m}")
        lo = float(sample.points[:, k].min())
        hi = float(sample.points[:, k].max())
        if lo == hi:
            raise DegenerateRangeError(
                f"dimension {k}: zero data range at {lo}, cannot place a grid"
            )
        knots.append(np.linspace(lo, hi, m))
        mesh.append((hi - lo) / (m - 1))
    return RectilinearGrid(tuple(knots), (True,) * sample.dim, tuple(mesh))


_SM64_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM64_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM64_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(state: np.ndarray) -> np.ndarray:
    """Output function of the splitmix64 generator, vectorized on uint64."""
    z = state + _SM64_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _SM64_M1
    z = (z ^ (z >> np.uint64(27))) * _SM64_M2
    return z ^ (z >> np.uint64(31))


def generate_gaussian_sample(n: int, d: int, seed: int) -> Sample:
    """Draw n i.i.d. standard-normal points in d dimensions with unit weights.

    Deterministic and platform-independent by construction: a counter-based
    splitmix64 stream feeds a Box-Muller transform, so the output is a pure
    function of ``(n, d, seed)``.
    """
    if n < 1 or d < 1:
        raise ParameterError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    m = n * d
    half = (m + 1) // 2
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    ctr = base + _SM64_GAMMA * np.arange(1, 2 * half + 1, dtype=np.uint64)
    bits = _splitmix64(ctr)
    # u1 in (0, 1] keeps log finite; u2 in [0, 1).
    u1 = ((bits[:half] >> np.uint64(11)) + np.uint64(1)) * 2.0**-53
    u2 = (bits[half:] >> np.uint64(11)) * 2.0**-53
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    z = np.empty(2 * half, dtype=np.float64)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    pts = z[:m].reshape(n, d)
    return validate_sample(pts)


def write_sample_csv(sample: Sample, path) -> None:
    """Write ``x1,...,xd[,w]`` rows with 17 significant digits.

    The weight column is emitted only when some weight differs from 1.
    """
    cols = [f"x{k + 1}" for k in range(sample.dim)]
    data = sample.points
    if not np.all(sample.weights == 1.0):
        cols.append("w")
        data = np.column_stack([sample.points, sample.weights])
    np.savetxt(path, data, fmt="%.17g", delimiter=",",
               header=",".join(cols), comments="")


def read_sample_csv(path) -> Sample:
    """Read a sample CSV written by :func:`write_sample_csv`; a missing
    weight column means unit weights."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        names = [c.strip() for c in header.split(",")]
        body = np.loadtxt(fh, delimiter=",", ndmin=2)
    has_w = bool(names) and names[-1] == "w"
    d = len(names) - 1 if has_w else len(names)
    if d < 1 or body.shape[1] != len(names):
        raise ShapeError(f"malformed sample CSV header {header!r}")
    if has_w:
        return validate_sample(body[:, :d], body[:, d])
    return validate_sample(body)
