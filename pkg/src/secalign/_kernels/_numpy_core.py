"""Vectorized numpy fallback for the enumeration kernels.

Same contracts as the compiled extension; see this package's __init__.py.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"

# Largest materialized block of the enumeration (entries, not bytes).
_BLOCK = 1 << 22


def cartesian_sums(coeffs, q: int) -> np.ndarray:
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    steps = np.arange(-q, q + 1, dtype=np.float64)
    vals = np.zeros(1, dtype=np.float64)
    for c in coeffs:
        vals = (vals[:, None] + c * steps[None, :]).reshape(-1)
    return vals


def sum_histogram(weights, q: int, offset: int, size: int) -> np.ndarray:
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    n = weights.shape[0]
    if n == 0:
        counts[offset] += 1
        return counts
    width = 2 * q + 1
    steps = np.arange(-q, q + 1, dtype=np.int64)
    # Split the coordinates so the materialized tail stays one block wide.
    tail_n = n
    tail_total = width**n
    while tail_total > _BLOCK and tail_n > 1:
        tail_n -= 1
        tail_total //= width
    tail = np.zeros(1, dtype=np.int64)
    for w in weights[n - tail_n:]:
        tail = (tail[:, None] + w * steps[None, :]).reshape(-1)
    head = np.zeros(1, dtype=np.int64)
    for w in weights[: n - tail_n]:
        head = (head[:, None] + w * steps[None, :]).reshape(-1)
    for base in head:
        counts += np.bincount(base + tail + offset, minlength=size)
    return counts
