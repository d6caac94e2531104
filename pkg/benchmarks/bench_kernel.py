#!/usr/bin/env python3
"""Benchmark the compiled interpreter kernel against the pure-Python twin.

Workload: the standard enumeration sweeps (all programs of each length up
to L) for the prefix kind and the monotone mass sweep, plus a batch of
single runs.  Run after `pip install -e .` so the extension is built:

    python benchmarks/bench_kernel.py [--budget-L 18]
"""

import argparse
import time

from kolmlab import _interp_py
from kolmlab._isa import KIND_PREFIX, KIND_TWICE_PREFIX

try:
    from kolmlab import _interp_cy
except ImportError:
    _interp_cy = None


def time_sweeps(impl, L, S):
    t0 = time.perf_counter()
    n_witness = 0
    cap = 1 << max(1, L // 3)
    for nbits in range(3, L + 1, 3):
        n_witness += len(impl.sweep_halting(KIND_PREFIX, nbits, None, S, cap))
        n_witness += len(impl.sweep_halting(KIND_TWICE_PREFIX, nbits, b"10", S, cap))
        n_witness += len(impl.sweep_monotone_mass(nbits, S, cap))
    return time.perf_counter() - t0, n_witness


def time_single_runs(impl, n):
    prog = b"001100100100010000"
    t0 = time.perf_counter()
    for _ in range(n):
        impl.run_bits(KIND_PREFIX, prog, None, 10_000, 4096)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--budget-L", type=int, default=18)
    parser.add_argument("--budget-S", type=int, default=10_000)
    parser.add_argument("--runs", type=int, default=200_000)
    args = parser.parse_args()

    impls = [("python", _interp_py)]
    if _interp_cy is not None:
        impls.append(("compiled", _interp_cy))
    else:
        print("compiled kernel not available; showing pure Python only")

    results = {}
    for name, impl in impls:
        sweep_t, count = time_sweeps(impl, args.budget_L, args.budget_S)
        run_t = time_single_runs(impl, args.runs)
        results[name] = (sweep_t, run_t)
        print(
            f"{name:>9}: sweeps L={args.budget_L} -> {sweep_t:8.3f} s "
            f"({count} records), {args.runs} single runs -> {run_t:8.3f} s"
        )
    if len(results) == 2:
        s_ratio = results["python"][0] / results["compiled"][0]
        r_ratio = results["python"][1] / results["compiled"][1]
        print(f"speedup: sweeps x{s_ratio:.1f}, single runs x{r_ratio:.1f}")


if __name__ == "__main__":
    main()
