"""GF(2) column reduction kernels.

Columns are bitmasks over their rows packed into uint64 words.  The
reduction is the standard left-to-right persistence algorithm: repeatedly
add (XOR) an earlier column with the same lowest nonzero row until the
column is zero or owns its lowest row.  The pairing it produces is
algorithm-independent, so this plain variant is the only one implemented.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True)
def _reduce_words(R, owner, pair_row):
    n_cols, n_words = R.shape
    for j in range(n_cols):
        while True:
            low = -1
            for wi in range(n_words - 1, -1, -1):
                w = R[j, wi]
                if w != _ZERO:
                    b = 63
                    while (w >> np.uint64(b)) & _ONE == _ZERO:
                        b -= 1
                    low = (wi << 6) | b
                    break
            if low < 0:
                break
            k = owner[low]
            if k < 0:
                owner[low] = j
                pair_row[j] = low
                break
            for wi in range((low >> 6) + 1):
                R[j, wi] ^= R[k, wi]


@njit(cache=True)
def _fill_fixed(R, face_pos):
    n_cols, width = face_pos.shape
    for j in range(n_cols):
        for a in range(width):
            r = face_pos[j, a]
            R[j, r >> 6] ^= _ONE << np.uint64(r & 63)


@njit(cache=True)
def _fill_csr(R, indptr, rows):
    n_cols = R.shape[0]
    for j in range(n_cols):
        for a in range(indptr[j], indptr[j + 1]):
            r = rows[a]
            R[j, r >> 6] ^= _ONE << np.uint64(r & 63)


def reduce_fixed_width(face_pos: np.ndarray, n_rows: int):
    """Reduce columns given as fixed-width row-position lists (one level of a complex).

    ``face_pos[j]`` holds the row positions of column ``j``; columns must
    already be in processing order and row positions in filtration order.
    Returns ``(pair_row, R)`` where ``pair_row[j]`` is the pivot row of
    column ``j`` after reduction (-1 for zero columns) and ``R`` is the
    reduced matrix as packed words.
    """
    n_cols = face_pos.shape[0]
    n_words = (n_rows + 63) // 64
    R = np.zeros((n_cols, n_words), dtype=np.uint64)
    pair_row = np.full(n_cols, -1, dtype=np.int64)
    if n_cols == 0 or n_rows == 0:
        return pair_row, R
    owner = np.full(n_rows, -1, dtype=np.int64)
    _fill_fixed(R, np.ascontiguousarray(face_pos, dtype=np.int64))
    _reduce_words(R, owner, pair_row)
    return pair_row, R


def reduce_csr(indptr: np.ndarray, rows: np.ndarray, n_rows: int):
    """Reduce columns given in CSR form (arbitrary sparsity per column)."""
    n_cols = len(indptr) - 1
    n_words = (n_rows + 63) // 64
    R = np.zeros((n_cols, n_words), dtype=np.uint64)
    pair_row = np.full(n_cols, -1, dtype=np.int64)
    if n_cols == 0 or n_rows == 0:
        return pair_row, R
    owner = np.full(n_rows, -1, dtype=np.int64)
    _fill_csr(R, np.ascontiguousarray(indptr, dtype=np.int64),
              np.ascontiguousarray(rows, dtype=np.int64))
    _reduce_words(R, owner, pair_row)
    return pair_row, R


def unpack_rows(R: np.ndarray, j: int) -> np.ndarray:
    """Row indices of the nonzero bits of reduced column ``j``."""
    bits = np.unpackbits(R[j].view(np.uint8), bitorder="little")
    return np.flatnonzero(bits)
