"""Compare the numba kernels with their numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is timed on
the same inputs in both variants (best of several repeats, after one warm-up
call so numba compilation is excluded) and the outputs are checked equal.
"""

import argparse
import timeit

import numpy as np

from toric_index import _kernels as k


def simplex_rows(dim, size):
    normals = np.vstack([np.eye(dim, dtype=np.int64), -np.ones((1, dim), dtype=np.int64)])
    bounds = np.array([0] * dim + [-size], dtype=np.int64)
    return normals, bounds


def cases(scale):
    n3, b3 = simplex_rows(3, 60 * scale)
    lo, hi = np.zeros(3, dtype=np.int64), np.full(3, 60 * scale, dtype=np.int64)
    rng = np.random.default_rng(7)
    pts = rng.integers(-10, 70 * scale, size=(400_000 * scale, 3), dtype=np.int64)
    n = 200_001 * scale
    d, lo_b, up_b = rng.standard_normal(n), rng.standard_normal(n - 1), rng.standard_normal(n - 1)
    return [
        ("scan_box (3d simplex)", k.scan_box_numba, k.scan_box_numpy, (n3, b3, lo, hi)),
        ("member_mask", k.member_mask_numba, k.member_mask_numpy, (n3, b3, pts)),
        ("dilation_bands", k.dilation_bands_numba, k.dilation_bands_numpy, (d, lo_b, up_b)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=1, help="multiply problem sizes")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not k.HAVE_NUMBA:
        raise SystemExit("numba is disabled or missing; nothing to compare")
    print(f"{'kernel':24s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, fast, slow, inputs in cases(args.scale):
        a, b = fast(*inputs), slow(*inputs)
        assert np.array_equal(a, b), name
        tf = min(timeit.repeat(lambda: fast(*inputs), number=1, repeat=args.repeat))
        ts = min(timeit.repeat(lambda: slow(*inputs), number=1, repeat=args.repeat))
        print(f"{name:24s} {tf * 1e3:11.2f} {ts * 1e3:11.2f} {ts / tf:7.1f}x")


if __name__ == "__main__":
    main()
