"""Integer batch kernels for property sweeps over many sampled behaviors.

Behaviors in a batch share a denominator and are passed as int64 numerator
rows, so every kernel is exact.  Each kernel has a numba version and a plain
numpy version; set BELLSCOPE_DISABLE_NUMBA=1 to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

from .core import expectation_row, no_signaling_rows, product_row

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

INT_LIMIT = 2**62


def numba_enabled() -> bool:
    flag = os.environ.get("BELLSCOPE_DISABLE_NUMBA", "").strip().lower()
    return numba is not None and flag not in ("1", "true", "yes", "on")


def _njit(f):
    if numba is None:  # pragma: no cover
        return f
    return numba.njit(cache=True)(f)


# --- kernels ------------------------------------------------------------------------


def _np_matmul_t(nums, coeffs):
    return nums @ coeffs.T


@_njit
def _nb_matmul_t(nums, coeffs):
    n, d = nums.shape
    m = coeffs.shape[0]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            s = 0
            for k in range(d):
                c = coeffs[j, k]
                if c != 0:
                    s += c * nums[i, k]
            out[i, j] = s
    return out


def _np_abs_row_max(x):
    return np.abs(x).max(axis=1)


@_njit
def _nb_abs_row_max(x):
    n, m = x.shape
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        best = 0
        for j in range(m):
            v = abs(x[i, j])
            if v > best:
                best = v
        out[i] = best
    return out


def _check_range(a, b):
    # |sum_k a_ik b_jk| <= d * max|a| * max|b| must stay inside int64
    bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * a.shape[1]
    if bound >= INT_LIMIT:
        raise OverflowError("batch entries too large for exact int64 evaluation")


def _as_int(x):
    x = np.asarray(x)
    if x.dtype.kind not in "iu":
        raise TypeError("batch kernels need integer arrays")
    return np.ascontiguousarray(x, dtype=np.int64)


def _matmul_t(nums, coeffs):
    nums, coeffs = _as_int(nums), _as_int(coeffs)
    if nums.ndim != 2 or coeffs.ndim != 2 or nums.shape[1] != coeffs.shape[1]:
        raise ValueError(f"shape mismatch {nums.shape} vs {coeffs.shape}")
    _check_range(nums, coeffs)
    if numba_enabled():
        return _nb_matmul_t(nums, coeffs)
    return _np_matmul_t(nums, coeffs)


def eval_batch(coeffs, nums):
    """Left-hand sides of m integer inequalities on n behaviors: (n, m) numerators."""
    return _matmul_t(nums, coeffs)


PROJECTION_MATRIX = np.array(
    [product_row(x, y) for x in range(2) for y in range(2)]
    + [expectation_row(1, x, y) for x in range(2) for y in range(2)]
    + [expectation_row(2, y, x) for y in range(2) for x in range(2)],
    dtype=np.int64,
)
NO_SIGNALING_MATRIX = np.array(no_signaling_rows(), dtype=np.int64)


def project_batch(nums):
    """Products and tagged marginals, in ExpectationSummary.components() order."""
    return _matmul_t(nums, PROJECTION_MATRIX)


def ns_gap_batch(nums):
    """Largest no-signaling defect of each behavior (numerator)."""
    d = _matmul_t(nums, NO_SIGNALING_MATRIX)
    if numba_enabled():
        return _nb_abs_row_max(d)
    return _np_abs_row_max(d)


def mix_batch(weights, vertices):
    """Integer combinations weights @ vertices, (n, k) x (k, 16) -> (n, 16)."""
    vertices = _as_int(vertices)
    return _matmul_t(weights, np.ascontiguousarray(vertices.T))
