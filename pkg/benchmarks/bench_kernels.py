#!/usr/bin/env python3
"""Benchmark the compiled search kernel against the pure-Python fallback.

Runs the same frame-reduced blocked-arc search through both kernels, checks
that solutions and statistics agree exactly, and prints a timing table.

    python benchmarks/bench_kernels.py --q 11 --k 6 --repeat 3
"""

import argparse
import sys
import time

from arcgeo.fields import field_from_order
from arcgeo.incidence import plane_index
from arcgeo.kernel import available_kernels


def run(kernel, idx, prefix, k, repeat):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = kernel.search_completions(idx, prefix, k)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", type=int, default=11, help="field order")
    parser.add_argument("--k", type=int, default=6, help="arc size")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    parser.add_argument("--unreduced", action="store_true", help="search without frame pinning")
    args = parser.parse_args(argv)

    kernels = available_kernels()
    if "compiled" not in kernels:
        print("compiled kernel is not built; showing the pure-Python kernel only")

    idx = plane_index(field_from_order(args.q))
    prefix = () if args.unreduced else idx.frame

    rows = []
    baseline = None
    reference = None
    for name in ("python", "compiled"):
        if name not in kernels:
            continue
        dt, result = run(kernels[name], idx, prefix, args.k, args.repeat)
        if reference is None:
            reference = result
            baseline = dt
        else:
            for field in ("solutions", "arcs_enumerated", "nodes", "pruned"):
                if result[field] != reference[field]:
                    print(f"MISMATCH in {field} between kernels", file=sys.stderr)
                    return 1
        rows.append((name, dt, result))

    print(f"search q={args.q} k={args.k} "
          f"({'unreduced' if args.unreduced else 'frame-reduced'}, best of {args.repeat})")
    print(f"{'kernel':<10} {'time':>12} {'speedup':>9} {'nodes':>12} {'solutions':>10}")
    for name, dt, result in rows:
        speed = baseline / dt if dt else float("inf")
        print(f"{name:<10} {dt:>11.4f}s {speed:>8.1f}x "
              f"{result['nodes']:>12} {len(result['solutions']):>10}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
