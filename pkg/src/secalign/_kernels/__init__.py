"""Hot enumeration kernels with a compiled core and a numpy fallback.

Two kernels dominate the toolkit's runtime and exist in both backends:

``cartesian_sums(coeffs, q)``
    All values ``sum_i coeffs[i] * b_i`` over ``b in {-q..q}^n``, ordered so
    that the enumeration index is the mixed-radix encoding of ``b + q`` with
    the first coordinate most significant (lexicographic in ``b``).

``sum_histogram(weights, q, offset, size)``
    Integer counts of ``offset + sum_i weights[i] * b_i`` over the same
    enumeration, as a dense ``int64`` array of length ``size``.

The Cython extension is used when importable; otherwise the numpy backend
is selected.  Set ``SECALIGN_KERNELS=numpy`` or ``=compiled`` to force one
(used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy_core

try:
    from . import _core
except ImportError:
    _core = None

_FORCED = os.environ.get("SECALIGN_KERNELS", "").strip().lower()
if _FORCED in ("numpy", "py", "python"):
    _impl = _numpy_core
elif _FORCED in ("compiled", "c", "cython"):
    if _core is None:
        raise ImportError(
            "SECALIGN_KERNELS=compiled but the extension is not built"
        )
    _impl = _core
else:
    _impl = _core if _core is not None else _numpy_core

#: Hard sanity limit on enumeration sizes; domain-level caps are tighter.
MAX_ENUM = 1 << 27


def active_backend() -> str:
    return _impl.BACKEND


def available_backends() -> dict:
    out = {"numpy": _numpy_core}
    if _core is not None:
        out["compiled"] = _core
    return out


def _check_total(n: int, q: int) -> int:
    if q < 0:
        raise ValueError("q must be non-negative")
    total = (2 * q + 1) ** n
    if total > MAX_ENUM:
        raise ValueError(f"enumeration of {total} states exceeds kernel limit")
    return total


def cartesian_sums(coeffs, q: int, impl=None) -> np.ndarray:
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    _check_total(coeffs.shape[0], q)
    return (impl or _impl).cartesian_sums(coeffs, int(q))


def sum_histogram(weights, q: int, offset: int, size: int, impl=None) -> np.ndarray:
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    _check_total(weights.shape[0], q)
    reach = int(q) * int(np.abs(weights).sum())
    if offset - reach < 0 or offset + reach >= size:
        raise ValueError("histogram keys would fall outside [0, size)")
    return (impl or _impl).sum_histogram(weights, int(q), int(offset), int(size))
