"""Small helpers for the vectorized (numpy) evaluation paths.

Values stay exact: int64 is used only while magnitudes are far from overflow,
otherwise arrays fall back to dtype=object holding Python ints.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exact import IntMatrix, s_k

_SAFE = 2 ** 24


def exact_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=object)
    if arr.size == 0:
        return arr.astype(np.int64)
    if max(abs(int(x)) for x in arr.flat) <= _SAFE:
        return arr.astype(np.int64)
    return arr


def as_int_columns(X) -> np.ndarray:
    X = np.asarray(X)
    if X.dtype == object:
        return X
    return X.astype(np.int64, copy=False)


def small(X: np.ndarray, bound: int = 2 ** 10) -> bool:
    if X.size == 0:
        return True
    if X.dtype == object:
        return max(abs(int(x)) for x in X.flat) <= bound
    return int(np.abs(X).max()) <= bound


@lru_cache(maxsize=None)
def _power_table(T: IntMatrix, kmin: int, kmax: int) -> np.ndarray:
    return exact_array([(T ** k).tolist() for k in range(kmin, kmax + 1)])


def power_table(T: IntMatrix, ks: np.ndarray) -> np.ndarray:
    """Stack of T^k for each entry of ``ks``; shape ``ks.shape + T.shape``."""
    ks = np.asarray(ks)
    if ks.size == 0:
        return np.zeros(ks.shape + T.shape, dtype=np.int64)
    kmin, kmax = int(ks.min()), int(ks.max())
    table = _power_table(T, kmin, kmax)
    return table[(ks - kmin).astype(np.int64)]


@lru_cache(maxsize=None)
def _s_table(T: IntMatrix, kmin: int, kmax: int) -> np.ndarray:
    return exact_array([s_k(T, k).tolist() for k in range(kmin, kmax + 1)])


def s_table(T: IntMatrix, ks: np.ndarray) -> np.ndarray:
    ks = np.asarray(ks)
    if ks.size == 0:
        n = T.shape[0] ** 2
        return np.zeros(ks.shape + (n, n), dtype=np.int64)
    kmin, kmax = int(ks.min()), int(ks.max())
    return _s_table(T, kmin, kmax)[(ks - kmin).astype(np.int64)]
