#!/usr/bin/env python3
"""Benchmark the spin-enumeration kernel: numba Gray-code walk vs pure numpy.

Usage:
    python benchmarks/bench_enumeration.py [--max-vertices 24]

The numba path is the default in the library; RTNEQ_PURE_NUMPY=1 forces the
numpy fallback everywhere.  This script times both directly.
"""

import argparse
import time

import numpy as np

from rtneq import _kernels
from rtneq.geometry import build_rtt, build_square_disc


def _arrays(geometry):
    edge_u = np.array([e.u for e in geometry.internal_edges], dtype=np.int64)
    edge_v = np.array([e.v for e in geometry.internal_edges], dtype=np.int64)
    stride = np.ones(len(edge_u), dtype=np.int64)
    legs = np.zeros(geometry.n_vertices, dtype=np.int64)
    return edge_u, edge_v, stride, legs


def bench(geometry, label, run_numpy=True):
    edge_u, edge_v, stride, legs = _arrays(geometry)
    n_keys = len(edge_u) + 1
    args = (geometry.n_vertices, edge_u, edge_v, stride, legs, n_keys, 1)

    t_numpy = None
    via_numpy = None
    if run_numpy:
        t0 = time.perf_counter()
        via_numpy = _kernels.gray_histogram_numpy(*args)
        t_numpy = time.perf_counter() - t0

    if _kernels.HAS_NUMBA:
        _kernels.gray_histogram(*args)  # warm the JIT cache
        t0 = time.perf_counter()
        via_numba = _kernels.gray_histogram(*args)
        t_numba = time.perf_counter() - t0
        if via_numpy is not None:
            assert np.array_equal(via_numpy, via_numba), "kernel paths disagree"
            ratio = t_numpy / t_numba if t_numba > 0 else float("inf")
            print(
                f"{label:<44} numba {t_numba*1e3:9.2f} ms   numpy {t_numpy*1e3:9.2f} ms"
                f"   speedup x{ratio:,.1f}"
            )
        else:
            print(f"{label:<44} numba {t_numba*1e3:9.2f} ms   numpy skipped")
    elif via_numpy is not None:
        print(f"{label:<44} numpy {t_numpy*1e3:9.2f} ms   (numba disabled)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--full", action="store_true",
        help="also time the numpy fallback at 2^24 configs (tens of seconds)",
    )
    args = parser.parse_args()

    for n in (16, 20):
        bench(build_rtt(n, True, 2, 2, 1), f"closed chain n={n} (2^{n} configs)")
    disc, n_v = build_square_disc(12, 2, 2, 1)
    bench(disc, f"diamond disc n=12 ({n_v} vertices)", run_numpy=args.full)
    bench(build_rtt(24, True, 2, 2, 1), "closed chain n=24 (2^24 configs)",
          run_numpy=args.full)


if __name__ == "__main__":
    main()
