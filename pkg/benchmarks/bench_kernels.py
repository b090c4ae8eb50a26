"""Timing comparison of the compiled and numpy enumeration kernels.

Run from the repo root:

    python3 benchmarks/bench_kernels.py

Both backends are timed on identical inputs through the public dispatch
layer; results are checked for exact agreement before timing, so a broken
extension cannot post a fast-but-wrong number.
"""

from __future__ import annotations

import time

import numpy as np

from secalign import _kernels, seeds


def _time(fn, repeats: int = 5) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    backends = _kernels.available_backends()
    print(f"active backend: {_kernels.active_backend()}")
    print(f"available: {sorted(backends)}")
    if "compiled" not in backends:
        print("extension not built; timing numpy alone")

    rng = seeds.derive(0, "bench")
    cases = [
        ("cartesian n=8  q=2", "cartesian", rng.standard_normal(8), 2),
        ("cartesian n=12 q=1", "cartesian", rng.standard_normal(12), 1),
        ("cartesian n=6  q=4", "cartesian", rng.standard_normal(6), 4),
        ("histogram n=10 q=2", "histogram", rng.integers(1, 50, size=10), 2),
        ("histogram n=8  q=4", "histogram", rng.integers(1, 200, size=8), 4),
    ]

    header = f"{'case':<20}" + "".join(f"{name:>12}" for name in sorted(backends))
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)

    for label, kind, arr, q in cases:
        outputs = {}
        times = {}
        for name, impl in backends.items():
            if kind == "cartesian":
                def run(impl=impl):
                    return _kernels.cartesian_sums(arr, q, impl=impl)
            else:
                w = np.asarray(arr, dtype=np.int64)
                reach = int(q * np.abs(w).sum())
                size = 2 * reach + 1

                def run(impl=impl, w=w, reach=reach, size=size):
                    return _kernels.sum_histogram(w, q, reach, size, impl=impl)
            outputs[name] = run()
            times[name] = _time(run)
        vals = list(outputs.values())
        if len(vals) > 1 and not np.array_equal(vals[0], vals[1]):
            raise AssertionError(f"{label}: backends disagree")
        row = f"{label:<20}"
        for name in sorted(backends):
            row += f"{times[name] * 1e3:>10.2f}ms"
        if len(backends) > 1:
            row += f"{times['numpy'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
