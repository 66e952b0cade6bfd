"""Benchmark the compiled kernel core against the pure-Python fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

Times the kernels that dominate flow integrations: scalar polygamma calls,
the adaptive Bose quadrature, and the array-valued Wick squares used by the
potential flow (one call per grid per right-hand-side evaluation).
"""

import time

import numpy as np

from lfrg import _kernels_py

try:
    from lfrg import _kernels as _compiled
except ImportError:
    _compiled = None


def timeit(fn, *args, repeat=5, number=1):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def bench(name, call_py, call_c, number=1):
    t_py = timeit(call_py, number=number)
    if call_c is None:
        print(f"{name:34s} python {t_py * 1e3:9.3f} ms   (no compiled core)")
        return
    t_c = timeit(call_c, number=number)
    print(f"{name:34s} python {t_py * 1e3:9.3f} ms   compiled {t_c * 1e3:9.3f} ms"
          f"   speedup {t_py / t_c:6.1f}x")


def main():
    print("kernel backends:", "python only" if _compiled is None
          else "python + compiled")
    xs = np.linspace(0.05, 50.0, 20_000)
    M2 = np.linspace(0.3, 4.0, 512)

    def poly_scan(mod):
        return lambda: [mod.digamma(x) for x in xs[:4000]]

    def bose(mod):
        return lambda: mod.bose_integral(1.0, 0.5, 0, 1e-10, 10_000)

    def mink_arr(mod):
        return lambda: mod.wick_minkowski_arr(M2, 4.0, 4)

    def thermal_arr(mod):
        return lambda: mod.wick_thermal_arr(M2, 4.0, 1.0, 1e-10, 10_000)

    def desitter_arr(mod):
        return lambda: mod.wick_desitter_arr(M2, 1.0, 1.0 / 6.0, 0.0)

    pairs = [
        ("digamma x4000 (scalar loop)", poly_scan),
        ("bose_integral(1.0, 0.5)", bose),
        ("wick_minkowski_arr, N=512", mink_arr),
        ("wick_thermal_arr, N=512", thermal_arr),
        ("wick_desitter_arr, N=512", desitter_arr),
    ]
    for name, make in pairs:
        bench(name, make(_kernels_py),
              None if _compiled is None else make(_compiled))


if __name__ == "__main__":
    main()
