"""Vectorized kernels over batches of permutations.

A batch is a 2-D integer array of shape ``(m, degree)`` whose rows are
0-indexed image lists.  Composition follows the same right-to-left rule as
:mod:`evencoset.perm`: ``compose(p, q)[i] == p[q[i]]``.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np

PACK_LIMIT = 16  # 4 bits per position in a uint64


def index_dtype(degree: int):
    return np.int8 if degree <= 127 else np.int16


@lru_cache(maxsize=16)
def _lex_table(k: int) -> tuple:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int8), np.zeros(1, dtype=np.int8)
    prev, prev_par = _lex_table(k - 1)
    rows = prev.shape[0]
    table = np.empty((k * rows, k), dtype=np.int8)
    par = np.empty(k * rows, dtype=np.int8)
    for first in range(k):
        block = slice(first * rows, (first + 1) * rows)
        table[block, 0] = first
        # relabel 0..k-2 onto the values other than `first`, order preserved
        table[block, 1:] = prev + (prev >= first)
        # `first` in front contributes exactly `first` inversions
        par[block] = (prev_par + first) % 2
    table.flags.writeable = False
    par.flags.writeable = False
    return table, par


def lex_permutations(k: int) -> tuple:
    """All permutations of ``range(k)`` in lexicographic order, with parities.

    >>> t, par = lex_permutations(3)
    >>> t.tolist(), par.tolist()
    ([[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]], [0, 1, 1, 0, 0, 1])
    """
    if k > 12:
        raise ValueError(f"refusing to tabulate {factorial(k)} permutations")
    return _lex_table(k)


def alternating_table(k: int) -> np.ndarray:
    table, par = lex_permutations(k)
    return table[par == 0]


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise ``p ∘ q``; either operand may be a single row."""
    p = np.asarray(p)
    q = np.asarray(q)
    if p.ndim == 1:
        return p[q]
    if q.ndim == 1:
        return p[:, q]
    return np.take_along_axis(p, q.astype(np.intp, copy=False), axis=1)


def left_multiply(g: np.ndarray, batch: np.ndarray) -> np.ndarray:
    """Rows ``g ∘ z`` for every row ``z`` of ``batch``."""
    return np.asarray(g)[batch]


def cycle_lengths(batch: np.ndarray) -> np.ndarray:
    """Length of the cycle through each point, same shape as ``batch``."""
    batch = np.asarray(batch)
    m, d = batch.shape
    itype = np.int32 if m * d < 2**31 else np.int64
    start = np.arange(m * d, dtype=itype)
    # successor of each point in flattened coordinates
    succ = (batch.astype(itype) + (np.arange(m, dtype=itype) * d)[:, None]).ravel()
    cur = succ.copy()
    lengths = np.zeros(m * d, dtype=np.int16)
    for step in range(1, d + 1):
        lengths[(cur == start) & (lengths == 0)] = step
        if step < d:
            cur = succ[cur]
    return lengths.reshape(m, d)


def orders(batch: np.ndarray) -> np.ndarray:
    """Element orders as uint64 (lcm of the per-point cycle lengths)."""
    lengths = cycle_lengths(batch).astype(np.uint64)
    return np.lcm.reduce(lengths, axis=1) if lengths.shape[1] else np.ones(len(lengths), np.uint64)


def parities(batch: np.ndarray, lengths: np.ndarray | None = None) -> np.ndarray:
    """0 for even rows, 1 for odd rows."""
    if lengths is None:
        lengths = cycle_lengths(batch)
    d = lengths.shape[1]
    ncycles = np.rint((1.0 / lengths).sum(axis=1)).astype(np.int64)
    return ((d - ncycles) % 2).astype(np.int8)


def pack_rows(rows: np.ndarray) -> np.ndarray:
    """Injective, order-preserving uint64 key for rows with values in 0..15."""
    rows = np.asarray(rows)
    d = rows.shape[1]
    if d > PACK_LIMIT:
        raise ValueError(f"cannot pack rows of width {d} > {PACK_LIMIT}")
    key = np.zeros(rows.shape[0], dtype=np.uint64)
    for i in range(d):
        key = (key << np.uint64(4)) | rows[:, i].astype(np.uint64)
    return key


def unpack_rows(keys: np.ndarray, d: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.uint64)
    out = np.empty((keys.shape[0], d), dtype=np.int8)
    for i in range(d - 1, -1, -1):
        out[:, i] = (keys & np.uint64(15)).astype(np.int8)
        keys = keys >> np.uint64(4)
    return out


def cycle_type_keys(lengths: np.ndarray) -> np.ndarray:
    """uint64 key per row identifying the cycle type (degree ≤ 16).

    The key packs the ascending-sorted per-point lengths (minus one), so two
    rows share a key exactly when their cycle types agree.
    """
    return pack_rows(np.sort(lengths, axis=1) - 1)


def key_to_parts(key: int, d: int) -> tuple:
    """Descending cycle-length parts from a :func:`cycle_type_keys` key."""
    per_point = unpack_rows(np.array([key], dtype=np.uint64), d)[0].astype(int) + 1
    parts = []
    i = 0
    while i < d:
        length = per_point[i]
        parts.append(int(length))
        i += length
    return tuple(sorted(parts, reverse=True))


def lex_min_rows(products: np.ndarray) -> np.ndarray:
    """For an ``(m, k, d)`` stack return the lexicographically least row per ``m``."""
    m, k, d = products.shape
    keys = pack_rows(products.reshape(m * k, d)).reshape(m, k)
    return unpack_rows(keys.min(axis=1), d)
