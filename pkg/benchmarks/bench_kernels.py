#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure NumPy
fallback on the three hot paths: real QR eigenvalues, complex QR
eigenvalues, and column-pivoted QR.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--sizes 10 20 40 80] [--repeat 5]
"""

import argparse
import time

import numpy as np

from linflow.backend import available_backends, get_backend
from linflow.spectral import _balance_inplace


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_real_eig(impl, a):
    h = a.copy()
    _balance_inplace(h)
    impl.hessenberg_inplace(h)
    hess = h.copy()

    def run():
        impl.real_hess_eigvals(hess.copy())

    return run


def bench_complex_eig(impl, a):
    h = a.copy()
    _balance_inplace(h)
    impl.hessenberg_inplace(h)
    hess = h.copy()

    def run():
        impl.complex_hess_eigvals(hess.copy())

    return run


def bench_cpqr(impl, a):
    def run():
        impl.cpqr_factor(a)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("note: compiled backend not built; timing the pure backend only")
    rng = np.random.default_rng(0)

    rows = []
    for n in args.sizes:
        a_real = rng.standard_normal((n, n))
        a_complex = a_real + 1j * rng.standard_normal((n, n))
        for label, make in (
            ("real eig", lambda impl: bench_real_eig(impl, a_real)),
            ("complex eig", lambda impl: bench_complex_eig(impl, a_complex)),
            ("cpqr", lambda impl: bench_cpqr(impl, a_real)),
        ):
            times = {}
            for name in backends:
                impl = get_backend(name)
                times[name] = _time(make(impl), args.repeat)
            speedup = (
                times["pure"] / times["compiled"] if "compiled" in times else None
            )
            rows.append((n, label, times.get("pure"), times.get("compiled"), speedup))

    print(f"{'n':>4}  {'kernel':<12} {'pure [ms]':>10} {'compiled [ms]':>14} {'speedup':>8}")
    for n, label, pure_t, fast_t, speedup in rows:
        fast_s = f"{1e3 * fast_t:14.3f}" if fast_t is not None else f"{'-':>14}"
        sp = f"{speedup:8.1f}" if speedup is not None else f"{'-':>8}"
        print(f"{n:>4}  {label:<12} {1e3 * pure_t:10.3f} {fast_s} {sp}")


if __name__ == "__main__":
    main()
