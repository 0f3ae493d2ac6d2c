"""Hot enumeration kernels for partition-function histograms.

The single expensive inner loop of the package is the walk over all 2^n_v
spin configurations of a geometry.  It is implemented twice: a numba-compiled
Gray-code walk with O(degree) incremental updates per step, and a chunked
pure-numpy fallback.  Set RTNEQ_PURE_NUMPY=1 to force the fallback (numba
missing triggers it automatically).  Both paths produce identical histograms.
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("RTNEQ_PURE_NUMPY", "0") not in ("", "0", "false", "False")

try:
    from numba import njit

    _NUMBA_OK = True
except ImportError:  # pragma: no cover - exercised via env flag instead
    _NUMBA_OK = False

HAS_NUMBA = _NUMBA_OK and not _FORCE_NUMPY


def gray_histogram_numpy(
    n_v: int,
    edge_u: np.ndarray,
    edge_v: np.ndarray,
    edge_stride: np.ndarray,
    leg_delta: np.ndarray,
    n_edge_keys: int,
    n_leg_keys: int,
    chunk: int = 1 << 18,
) -> np.ndarray:
    """Histogram of (edge anti-alignment key, down-leg key) over all spin configs."""
    hist = np.zeros((n_edge_keys, n_leg_keys), dtype=np.int64)
    total = 1 << n_v
    shifts = np.arange(n_v, dtype=np.uint64)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        configs = np.arange(start, stop, dtype=np.uint64)
        bits = ((configs[:, None] >> shifts) & 1).astype(np.int64)
        if len(edge_u):
            anti = bits[:, edge_u] ^ bits[:, edge_v]
            ekey = anti @ edge_stride
        else:
            ekey = np.zeros(stop - start, dtype=np.int64)
        lkey = bits @ leg_delta
        np.add.at(hist, (ekey, lkey), 1)
    return hist


if _NUMBA_OK:

    @njit(cache=True)
    def _gray_histogram_numba(n_v, indptr, nbr, nbr_stride, leg_delta, n_edge_keys, n_leg_keys):
        hist = np.zeros((n_edge_keys, n_leg_keys), dtype=np.int64)
        spins = np.zeros(n_v, dtype=np.uint8)
        ekey = 0
        lkey = 0
        hist[0, 0] += 1
        total = np.int64(1) << n_v
        for t in range(1, total):
            # flip the bit at the lowest set position of t
            k = 0
            tt = t
            while tt & 1 == 0:
                tt >>= 1
                k += 1
            spins[k] ^= 1
            for idx in range(indptr[k], indptr[k + 1]):
                if spins[k] == spins[nbr[idx]]:
                    ekey -= nbr_stride[idx]
                else:
                    ekey += nbr_stride[idx]
            if spins[k] == 1:
                lkey += leg_delta[k]
            else:
                lkey -= leg_delta[k]
            hist[ekey, lkey] += 1
        return hist


def gray_histogram(
    n_v: int,
    edge_u: np.ndarray,
    edge_v: np.ndarray,
    edge_stride: np.ndarray,
    leg_delta: np.ndarray,
    n_edge_keys: int,
    n_leg_keys: int,
) -> np.ndarray:
    """Dispatch to the numba walk unless the pure-numpy path is forced."""
    if HAS_NUMBA:
        indptr = np.zeros(n_v + 1, dtype=np.int64)
        deg = np.zeros(n_v, dtype=np.int64)
        for u, v in zip(edge_u, edge_v):
            deg[u] += 1
            deg[v] += 1
        indptr[1:] = np.cumsum(deg)
        nbr = np.zeros(max(1, indptr[-1]), dtype=np.int64)
        nbr_stride = np.zeros(max(1, indptr[-1]), dtype=np.int64)
        fill = indptr[:-1].copy()
        for u, v, s in zip(edge_u, edge_v, edge_stride):
            nbr[fill[u]] = v
            nbr_stride[fill[u]] = s
            fill[u] += 1
            nbr[fill[v]] = u
            nbr_stride[fill[v]] = s
            fill[v] += 1
        return _gray_histogram_numba(
            n_v, indptr, nbr, nbr_stride,
            np.asarray(leg_delta, dtype=np.int64), n_edge_keys, n_leg_keys,
        )
    return gray_histogram_numpy(
        n_v,
        np.asarray(edge_u, dtype=np.int64),
        np.asarray(edge_v, dtype=np.int64),
        np.asarray(edge_stride, dtype=np.int64),
        np.asarray(leg_delta, dtype=np.int64),
        n_edge_keys,
        n_leg_keys,
    )
