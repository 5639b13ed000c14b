#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernel backends on real workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from qident import kernels, nahm, jets


def _time(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def _workloads():
    quint = nahm.build_b2_quintuple_form()
    d4 = nahm.build_d4_form()
    bform5 = nahm.build_B_form(5)

    def conv():
        a = list(range(1, 400))
        b = list(range(2, 402))
        kernels.conv_trunc(a, b, 400)

    def geom():
        arr = [1] * 4000
        for step in range(1, 40):
            kernels.geom_div(arr, step)

    return [
        ("conv_trunc 400x400", conv),
        ("geom_div 4000 x 39 steps", geom),
        ("b2 quintuple @ q^50", lambda: nahm.evaluate(quint, 50, charges=False)),
        ("d4 twelve-variable @ q^24", lambda: nahm.evaluate(d4, 24, charges=False)),
        ("B form n=5 charged @ q^14", lambda: nahm.evaluate(bform5, 14, charges=True)),
        ("so(5) jets A @ weight 8", lambda: jets.hilbert_series(jets.b2_A(), 8)),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built (python setup.py build_ext --inplace); "
              "timing pure only")
    rows = []
    for name, fn in _workloads():
        timings = {}
        for backend in backends:
            kernels.use(backend)
            timings[backend] = _time(fn, args.repeat)
        rows.append((name, timings))
    kernels.use(backends[-1])

    width = max(len(name) for name, _ in rows)
    header = f"{'workload':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, timings in rows:
        line = f"{name:<{width}}  " + "  ".join(
            f"{timings[b] * 1000:9.2f}ms" for b in backends)
        if len(backends) == 2:
            line += f"  {timings['pure'] / timings['compiled']:7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
