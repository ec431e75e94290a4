"""Brute-force O(M*N) oracles for the generalized ECDF/ESF and for KDE.

These are the ground truth every fast path is checked against.  Sums are
Kahan-compensated for reproducibility; the fast algorithms deliberately use
plain summation so that comparisons measure their rounding honestly.
"""

from __future__ import annotations

import math
import time

import numpy as np
from numba import njit

from .core import (
    POINT_ALIGNED,
    Bandwidth,
    DeltaVector,
    EvalResult,
    ParameterError,
    Sample,
    ShapeError,
)
from .kernels import KernelSpec, bandwidth_rotation

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# 1-d profile dispatch codes for the jitted loops.
_POLYEXP, _UNIFORM, _MATERN32_ADD, _MATERN32_PROD, _GAUSSIAN, _BETA, _LAPMIX_A = range(7)


def _kernel_dispatch(spec: KernelSpec):
    fam = spec.family
    one = np.array([1.0])
    if fam == "laplacian":
        return _POLYEXP, 1.0, one, 0.5, 1.0
    if fam in ("polyexp", "matern"):
        return _POLYEXP, spec.alpha, np.asarray(spec.betas, dtype=np.float64), \
            spec.gamma, spec.shape_h
    if fam == "fourth-order-laplacian":
        if spec.variant == "a":
            return _LAPMIX_A, 0.0, one, 0.0, 1.0
        if spec.variant == "b":
            return _POLYEXP, 1.0, np.array([3.0, -1.0]), 0.25, 1.0
        return _POLYEXP, 1.0, np.array([3.0, 0.0, -0.25]), 0.2, 1.0
    if fam == "uniform":
        return _UNIFORM, 0.0, one, 0.0, 1.0
    if fam == "matern32-additive":
        return _MATERN32_ADD, 0.0, one, 0.0, 1.0
    if fam == "matern32-product":
        return _MATERN32_PROD, 0.0, one, 0.0, 1.0
    if fam == "gaussian":
        return _GAUSSIAN, 0.0, one, 0.0, 1.0
    if fam == "beta":
        a = spec.beta_exponent
        log_norm = (2 * a + 1) * math.log(2.0) + (
            2 * math.lgamma(a + 1) - math.lgamma(2 * a + 2)
        )
        return _BETA, a, one, math.exp(-log_norm), 1.0
    raise ParameterError(f"kde_naive does not support kernel family {fam!r}")


@njit(cache=True)
def _profile1(code, alpha, betas, gamma, shape_h, t):
    if code == _POLYEXP:
        s = t / shape_h
        poly = 0.0
        for k in range(betas.shape[0] - 1, -1, -1):
            poly = poly * s + betas[k]
        return (gamma / shape_h) * poly * np.exp(-alpha * s)
    if code == _UNIFORM:
        return 0.5 if t <= 1.0 else 0.0
    if code == _MATERN32_PROD:
        return 0.25 * (1.0 + t) * np.exp(-t)
    if code == _GAUSSIAN:
        return np.exp(-0.5 * t * t) / _SQRT_2PI
    if code == _BETA:
        if t > 1.0:
            return 0.0
        base = 1.0 - t * t
        if base < 0.0:
            base = 0.0
        return gamma * base**alpha
    if code == _LAPMIX_A:
        return (2.0 * np.exp(-t) - 0.25 * np.exp(-0.5 * t)) / 3.0
    return 0.0


@njit(cache=True)
def _ecdf_naive_loop(points, weights, queries, signs, exclude_self, out):
    n, d = points.shape
    for q in range(queries.shape[0]):
        acc = 0.0
        comp = 0.0
        for i in range(n):
            if exclude_self and i == q:
                continue
            ok = True
            for k in range(d):
                if signs[k] > 0:
                    if points[i, k] > queries[q, k]:
                        ok = False
                        break
                else:
                    if points[i, k] >= queries[q, k]:
                        ok = False
                        break
            if ok:
                y = weights[i] - comp
                t = acc + y
                comp = (t - acc) - y
                acc = t
        out[q] = acc


@njit(cache=True)
def _kde_naive_diag_loop(points, weights, queries, h, code, alpha, betas,
                         gamma, shape_h, out):
    n, d = points.shape
    for q in range(queries.shape[0]):
        acc = 0.0
        comp = 0.0
        for i in range(n):
            if code == _MATERN32_ADD:
                s = 0.0
                for k in range(d):
                    s += abs((points[i, k] - queries[q, k]) / h[k])
                val = (1.0 + s) * np.exp(-s)
            else:
                val = 1.0
                for k in range(d):
                    t = abs((points[i, k] - queries[q, k]) / h[k])
                    val *= _profile1(code, alpha, betas, gamma, shape_h, t)
                    if val == 0.0:
                        break
            y = weights[i] * val - comp
            t2 = acc + y
            comp = (t2 - acc) - y
            acc = t2
        out[q] = acc


@njit(cache=True)
def _kde_naive_matrix_loop(points, weights, queries, rot, h, code, alpha,
                           betas, gamma, shape_h, out):
    # Kernel evaluated in the eigenbasis of H: u = diag(1/h) R^T (x - z).
    n, d = points.shape
    for q in range(queries.shape[0]):
        acc = 0.0
        comp = 0.0
        for i in range(n):
            if code == _MATERN32_ADD:
                s = 0.0
                for k in range(d):
                    uk = 0.0
                    for m in range(d):
                        uk += rot[m, k] * (points[i, m] - queries[q, m])
                    s += abs(uk / h[k])
                val = (1.0 + s) * np.exp(-s)
            else:
                val = 1.0
                for k in range(d):
                    uk = 0.0
                    for m in range(d):
                        uk += rot[m, k] * (points[i, m] - queries[q, m])
                    val *= _profile1(code, alpha, betas, gamma, shape_h,
                                     abs(uk / h[k]))
                    if val == 0.0:
                        break
            y = weights[i] * val - comp
            t2 = acc + y
            comp = (t2 - acc) - y
            acc = t2
        out[q] = acc


def _as_queries(queries, dim: int) -> np.ndarray:
    q = np.ascontiguousarray(queries, dtype=np.float64)
    if q.ndim == 1:
        q = q.reshape(-1, 1) if dim == 1 else q.reshape(1, -1)
    if q.ndim != 2 or q.shape[1] != dim:
        raise ShapeError(f"queries must be (Q, {dim}), got shape {q.shape}")
    return q


def ecdf_naive(sample: Sample, queries, delta: DeltaVector | None = None,
               exclude_self: bool = False, scaled: bool = True) -> EvalResult:
    """Direct double-loop generalized ECDF at arbitrary query points.

    ``exclude_self`` skips the i == j term by index and is only meaningful
    when the queries are the sample points in input order.
    """
    t0 = time.perf_counter()
    delta = delta or DeltaVector.ones(sample.dim)
    if delta.dim != sample.dim:
        raise ParameterError("delta dimension does not match sample")
    q = _as_queries(queries, sample.dim)
    out = np.empty(q.shape[0])
    _ecdf_naive_loop(sample.points, sample.weights, q, delta.as_array(),
                     exclude_self, out)
    if scaled:
        out /= sample.count
    return EvalResult(out, POINT_ALIGNED, {
        "method": "naive", "scaled": scaled,
        "runtime_seconds": time.perf_counter() - t0,
    })


def esf_naive(sample: Sample, queries, scaled: bool = True) -> EvalResult:
    """Survival function oracle: strict dominance above the query."""
    res = ecdf_naive(Sample(-sample.points, sample.weights,
                            sample.distinct_by_dim),
                     -_as_queries(queries, sample.dim),
                     DeltaVector.minus_ones(sample.dim), False, scaled)
    res.metadata["method"] = "naive-esf"
    return res


def kde_naive(sample: Sample, queries, kernel: KernelSpec,
              bandwidth: Bandwidth) -> EvalResult:
    """Direct kernel sum at arbitrary query points.

    A matrix bandwidth is handled by evaluating the kernel in the eigenbasis
    of H (rotation inside the pair loop), scaled by det(H)^(-1/2).
    """
    t0 = time.perf_counter()
    q = _as_queries(queries, sample.dim)
    code, alpha, betas, gamma, shape_h = _kernel_dispatch(kernel)
    out = np.empty(q.shape[0])
    if bandwidth.is_diagonal:
        h = bandwidth.diagonal
        if h.size != sample.dim:
            raise ParameterError("bandwidth dimension does not match sample")
        _kde_naive_diag_loop(sample.points, sample.weights, q, h, code, alpha,
                             betas, gamma, shape_h, out)
    else:
        rot, h = bandwidth_rotation(bandwidth.matrix)
        _kde_naive_matrix_loop(sample.points, sample.weights, q, rot, h, code,
                               alpha, betas, gamma, shape_h, out)
    scale = 1.0 / (sample.count * np.prod(h))
    if kernel.family == "matern32-additive":
        scale /= 2.0**sample.dim * (1.0 + sample.dim)
    out *= scale
    return EvalResult(out, POINT_ALIGNED, {
        "method": "naive", "kernel": str(kernel),
        "runtime_seconds": time.perf_counter() - t0,
    })
