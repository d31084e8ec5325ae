"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and the environment
variable ``TORIC_INDEX_DISABLE_NUMBA`` is unset (or ``0``).  Both paths are
always importable so tests and the benchmark can compare them directly.

Lattice kernels work in int64.  Callers are responsible for the overflow
guard (see :func:`fits_int64`); the exact pure-Python fallback lives in
:mod:`toric_index.polytope`.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

INT64_SAFE = 2**62


def _numba_wanted() -> bool:
    flag = os.environ.get("TORIC_INDEX_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


try:
    if not _numba_wanted():
        raise ImportError("numba disabled by TORIC_INDEX_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag in CI
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def fits_int64(normals, bounds, lo, hi) -> bool:
    """True if every partial sum of ``<normal, x>`` over the box fits in int64."""
    span = [max(abs(int(a)), abs(int(b))) for a, b in zip(lo, hi)]
    for row, b in zip(normals, bounds):
        if sum(abs(int(c)) * s for c, s in zip(row, span)) + abs(int(b)) >= INT64_SAFE:
            return False
    return all(abs(int(v)) < INT64_SAFE for v in list(lo) + list(hi))


# ---------------------------------------------------------------------------
# Lattice box scan: all integer x in [lo, hi] with normals @ x >= bounds.


def scan_box_numpy(normals: np.ndarray, bounds: np.ndarray, lo: np.ndarray,
                   hi: np.ndarray) -> np.ndarray:
    d = lo.shape[0]
    if np.any(hi < lo):
        return np.zeros((0, d), dtype=np.int64)
    last = np.arange(lo[-1], hi[-1] + 1, dtype=np.int64)
    col = normals[:, -1][:, None] * last[None, :]
    chunks = []
    ranges = [range(int(a), int(b) + 1) for a, b in zip(lo[:-1], hi[:-1])]
    for prefix in itertools.product(*ranges):
        p = np.asarray(prefix, dtype=np.int64)
        base = normals[:, :-1] @ p if d > 1 else np.zeros(len(bounds), dtype=np.int64)
        ok = np.all(base[:, None] + col >= bounds[:, None], axis=0)
        if ok.any():
            t = last[ok]
            block = np.empty((t.shape[0], d), dtype=np.int64)
            block[:, :-1] = p
            block[:, -1] = t
            chunks.append(block)
    if not chunks:
        return np.zeros((0, d), dtype=np.int64)
    return np.concatenate(chunks, axis=0)


@njit(cache=True)
def _scan_pass(normals, bounds, lo, hi, out, fill):
    m, d = normals.shape
    x = lo.copy()
    acc = np.zeros(m, dtype=np.int64)
    for i in range(m):
        for j in range(d):
            acc[i] += normals[i, j] * x[j]
    count = 0
    while True:
        ok = True
        for i in range(m):
            if acc[i] < bounds[i]:
                ok = False
                break
        if ok:
            if fill:
                for j in range(d):
                    out[count, j] = x[j]
            count += 1
        # odometer increment, last coordinate fastest
        j = d - 1
        while j >= 0:
            if x[j] < hi[j]:
                x[j] += 1
                for i in range(m):
                    acc[i] += normals[i, j]
                break
            for i in range(m):
                acc[i] -= normals[i, j] * (x[j] - lo[j])
            x[j] = lo[j]
            j -= 1
        if j < 0:
            break
    return count


def scan_box_numba(normals: np.ndarray, bounds: np.ndarray, lo: np.ndarray,
                   hi: np.ndarray) -> np.ndarray:
    d = lo.shape[0]
    if np.any(hi < lo):
        return np.zeros((0, d), dtype=np.int64)
    dummy = np.zeros((0, d), dtype=np.int64)
    n = _scan_pass(normals, bounds, lo, hi, dummy, False)
    out = np.empty((n, d), dtype=np.int64)
    _scan_pass(normals, bounds, lo, hi, out, True)
    return out


def scan_box(normals, bounds, lo, hi) -> np.ndarray:
    args = (
        np.ascontiguousarray(normals, dtype=np.int64),
        np.ascontiguousarray(bounds, dtype=np.int64),
        np.ascontiguousarray(lo, dtype=np.int64),
        np.ascontiguousarray(hi, dtype=np.int64),
    )
    if HAVE_NUMBA:
        return scan_box_numba(*args)
    return scan_box_numpy(*args)


# ---------------------------------------------------------------------------
# Batch membership: mask[k] = all(normals @ points[k] >= bounds).


def member_mask_numpy(normals: np.ndarray, bounds: np.ndarray,
                      points: np.ndarray) -> np.ndarray:
    if points.shape[0] == 0:
        return np.zeros(0, dtype=np.bool_)
    return np.all(points @ normals.T >= bounds[None, :], axis=1)


@njit(cache=True)
def member_mask_numba(normals, bounds, points):
    n = points.shape[0]
    m, d = normals.shape
    out = np.ones(n, dtype=np.bool_)
    for k in range(n):
        for i in range(m):
            s = 0
            for j in range(d):
                s += normals[i, j] * points[k, j]
            if s < bounds[i]:
                out[k] = False
                break
    return out


def member_mask(normals, bounds, points) -> np.ndarray:
    args = (
        np.ascontiguousarray(normals, dtype=np.int64),
        np.ascontiguousarray(bounds, dtype=np.int64),
        np.ascontiguousarray(points, dtype=np.int64),
    )
    if HAVE_NUMBA:
        return member_mask_numba(*args)
    return member_mask_numpy(*args)


# ---------------------------------------------------------------------------
# Hermitian dilation of a tridiagonal block in LAPACK upper band storage.
#
# For B with diagonal d, sub-diagonal lo and super-diagonal up, the dilation
# [[0, B^H], [B, 0]] is stored interleaved (u_0, v_0, u_1, v_1, ...), which
# has bandwidth 3: ab[3 + i - j, j] = H[i, j] for i <= j.


def dilation_bands_numpy(d: np.ndarray, lo: np.ndarray, up: np.ndarray) -> np.ndarray:
    n = d.shape[0]
    ab = np.zeros((4, 2 * n), dtype=np.result_type(d, lo, up))
    # Upper storage holds H[i, j] for i <= j, so entries of B that land below
    # the diagonal of H (d and lo) enter conjugated.
    ab[2, 1::2] = np.conj(d)   # H[2i, 2i+1]   = conj(d[i])
    ab[2, 2::2] = up           # H[2i+1, 2i+2] = up[i]
    ab[0, 3::2] = np.conj(lo)  # H[2i-2, 2i+1] = conj(lo[i-1])
    return ab


@njit(cache=True)
def _dilation_fill(d, lo, up, ab):
    n = d.shape[0]
    for i in range(n):
        ab[2, 2 * i + 1] = np.conj(d[i])
        if i + 1 < n:
            ab[2, 2 * i + 2] = up[i]
        if i >= 1:
            ab[0, 2 * i + 1] = np.conj(lo[i - 1])
    return ab


def dilation_bands_numba(d: np.ndarray, lo: np.ndarray, up: np.ndarray) -> np.ndarray:
    dtype = np.result_type(d, lo, up)
    ab = np.zeros((4, 2 * d.shape[0]), dtype=dtype)
    return _dilation_fill(d.astype(dtype), lo.astype(dtype), up.astype(dtype), ab)


def dilation_bands(d, lo, up) -> np.ndarray:
    d = np.ascontiguousarray(d)
    lo = np.ascontiguousarray(lo)
    up = np.ascontiguousarray(up)
    if HAVE_NUMBA:
        return dilation_bands_numba(d, lo, up)
    return dilation_bands_numpy(d, lo, up)
