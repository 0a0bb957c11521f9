#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Runs the three hot kernels on representative workloads with every backend
that imported, checks the outputs agree, and prints a timing table.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

from enkit import parse_equation, parse_polynomial
from enkit.kernels import backends
from enkit.reductions import lemma_descriptor


def _time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def workloads():
    # grid_roots: a cubic surface over a 101^3 box (~10^6 points).
    poly = parse_polynomial("x1^2*x2 - x3^2 + x1 - 7", 3)
    terms = poly.sorted_terms()
    grid_args = (tuple(e for e, _ in terms), tuple(c for _, c in terms),
                 (-50, -50, -50), (50, 50, 50))

    # family_join: the 625-member family of 2*(x1 - x2).
    desc = lemma_descriptor(parse_equation("x1 = x2").normalized)
    basis = desc.basis()
    vectors = list(desc.iter_vectors())
    join_args = (vectors, desc.coeff_lo, desc.coeff_hi, basis,
                 desc.degree_bounds)

    # check_equations: a long alternating add/mul chain, checked many times.
    n = 2000
    ops, ii, jj, kk = [], [], [], []
    values = [0] * (n + 1)
    values[1] = 1
    for i in range(1, n):
        ops.append(1 if i % 2 else 2)
        ii.append(i)
        jj.append(1)
        kk.append(i + 1)
        values[i + 1] = values[i] + values[1] if i % 2 else values[i] * values[1]
    check_args = (tuple(ops), tuple(ii), tuple(jj), tuple(kk), values)

    return [
        ("grid_roots 101^3 box", "grid_roots", grid_args, 1),
        ("family_join 625 members", "family_join", join_args, 1),
        ("check_equations 2k eqs x 200", "check_equations", check_args, 200),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    impls = backends()
    print(f"backends: {', '.join(impls)}")
    print(f"{'workload':<32}" + "".join(f"{name:>12}" for name in impls)
          + f"{'speedup':>10}")
    for label, fn_name, fn_args, inner in workloads():
        timings = {}
        results = {}
        for name, impl in impls.items():
            fn = getattr(impl, fn_name)

            def run():
                out = None
                for _ in range(inner):
                    out = fn(*fn_args)
                return out

            timings[name], results[name] = _time(run, args.repeat)
        baseline = results["pure"]
        for name, result in results.items():
            assert result == baseline, f"{fn_name}: {name} disagrees with pure"
        row = f"{label:<32}"
        for name in impls:
            row += f"{timings[name] * 1000:>10.1f}ms"
        if "compiled" in timings:
            row += f"{timings['pure'] / timings['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
