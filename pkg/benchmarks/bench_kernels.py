#!/usr/bin/env python3
"""Benchmark the compiled scalar-kernel backend against the pure-Python twin.

Runs each hot special-function kernel over a fixed workload with both
implementations, reports wall time and speedup, and cross-checks that the
two backends agree to tight tolerance on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import math
import time

from gonogo.kernels import _special_py

try:
    from gonogo.kernels import _special_cy
except ImportError:
    _special_cy = None


def workload_normal(mod):
    acc = 0.0
    for i in range(20_000):
        p = (i + 0.5) / 20_000
        acc += mod.normal_quantile(p) + mod.normal_cdf(4 * p - 2)
    return acc


def workload_beta(mod):
    acc = 0.0
    for i in range(2_000):
        q = (i + 0.5) / 2_000
        acc += mod.beta_quantile(q, 3.5, 12.0) + mod.beta_cdf(q, 8.0, 2.0)
    return acc


def workload_binom(mod):
    acc = 0.0
    for n in range(10, 210):
        for x in range(0, n + 1, 7):
            acc += mod.binom_sf(x, n, 0.3) + mod.binom_cdf(x, n, 0.45)
    return acc


def workload_t(mod):
    acc = 0.0
    for i in range(2_000):
        p = 0.5 + 0.499 * (i + 0.5) / 2_000
        acc += mod.t_quantile(p, 14.0) + mod.t_cdf(2.0 * p, 29.0)
    return acc


WORKLOADS = [
    ("normal cdf/quantile x 40k", workload_normal),
    ("beta cdf/quantile x 4k", workload_beta),
    ("binomial tails x ~12k", workload_binom),
    ("student-t cdf/quantile x 4k", workload_t),
]


def time_workload(fn, mod, repeats):
    best = math.inf
    value = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        value = fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best, value


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing repeats per workload (best is reported)")
    args = ap.parse_args()

    if _special_cy is None:
        print("compiled backend not available; showing pure-Python only")

    header = f"{'workload':<30} {'python':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn in WORKLOADS:
        t_py, v_py = time_workload(fn, _special_py, args.repeats)
        if _special_cy is None:
            print(f"{name:<30} {t_py * 1e3:>8.1f}ms {'-':>10} {'-':>8}")
            continue
        t_cy, v_cy = time_workload(fn, _special_cy, args.repeats)
        if not math.isclose(v_py, v_cy, rel_tol=1e-9):
            raise SystemExit(
                f"backend disagreement on {name}: {v_py!r} vs {v_cy!r}")
        print(f"{name:<30} {t_py * 1e3:>8.1f}ms {t_cy * 1e3:>8.1f}ms "
              f"{t_py / t_cy:>7.1f}x")
    print("\nchecksums agree between backends (rel 1e-9)")


if __name__ == "__main__":
    main()
