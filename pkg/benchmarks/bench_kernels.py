"""Time the mean-field kernels, pure Python against the compiled extension.

Three workloads: pointwise energy+gradient calls, multistart descents at a
condensed and a degenerate coupling point, and a landscape fill.  Results are
also cross-checked bitwise, since the two backends are written to produce
identical floats.

Run as  python benchmarks/bench_kernels.py  from the repository root.
"""

import argparse
import time

import numpy as np

from dicke2q.kernels import available_backends

OMEGA = 1.0
OMEGA0 = 1.0
GTOL = 1e-12
MAX_ITER = 200_000


def time_best(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def pointwise(mod, points):
    def run():
        total = 0.0
        for u, v in points:
            total += mod.energy_scaled(u, v, OMEGA, OMEGA0, 1.0, 0.3)
            gu, gv = mod.gradient_scaled(u, v, OMEGA, OMEGA0, 1.0, 0.3)
            total += gu + gv
        return total

    return run


def descents(mod, starts_u, starts_v, we, wm):
    def run():
        return mod.multistart(starts_u, starts_v, OMEGA, OMEGA0, we, wm, GTOL, MAX_ITER)

    return run


def landscape(mod, axis):
    def run():
        return mod.landscape_fill(axis, axis, OMEGA, OMEGA0, 1.0, 0.3)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="take the best of this many runs")
    parser.add_argument("--points", type=int, default=20_000, help="pointwise workload size")
    parser.add_argument("--starts", type=int, default=400, help="descents per coupling point")
    parser.add_argument("--grid", type=int, default=301, help="landscape axis length")
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled extension not importable; timing the python backend only")

    rng = np.random.default_rng(7)
    radius = np.sqrt(rng.uniform(0.0, 0.96, args.points))
    angle = rng.uniform(0.0, 2.0 * np.pi, args.points)
    points = list(zip(radius * np.cos(angle), radius * np.sin(angle)))

    r = np.sqrt(rng.uniform(0.01, 0.9, args.starts))
    th = rng.uniform(0.0, 2.0 * np.pi, args.starts)
    starts_u = r * np.cos(th)
    starts_v = r * np.sin(th)
    axis = np.linspace(-1.05, 1.05, args.grid)

    workloads = [
        (f"pointwise energy+gradient ({args.points} calls)", lambda m: pointwise(m, points)),
        (f"multistart descend, condensed ({args.starts} starts)", lambda m: descents(m, starts_u, starts_v, 1.0, 0.3)),
        (f"multistart descend, degenerate ({args.starts} starts)", lambda m: descents(m, starts_u, starts_v, 1.0, 1.0)),
        (f"landscape fill ({args.grid}x{args.grid})", lambda m: landscape(m, axis)),
    ]

    width = max(len(name) for name, _ in workloads)
    header = f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))

    mismatches = 0
    for name, make in workloads:
        t_py, r_py = time_best(make(backends["python"]), args.repeats)
        if "compiled" in backends:
            t_c, r_c = time_best(make(backends["compiled"]), args.repeats)
            print(f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {t_c * 1e3:>8.2f}ms  {t_py / t_c:>7.1f}x")
            mismatches += not identical(r_py, r_c)
        else:
            print(f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")

    if "compiled" in backends:
        if mismatches:
            print(f"\nWARNING: {mismatches} workload(s) disagree between backends")
        else:
            print("\nall workload outputs bit-identical across backends")


def identical(a, b):
    if isinstance(a, tuple):
        return all(identical(x, y) for x, y in zip(a, b))
    a = np.asarray(a)
    b = np.asarray(b)
    both_nan = np.isnan(a) & np.isnan(b) if a.dtype.kind == "f" else np.zeros(a.shape, bool)
    return bool(np.all((a == b) | both_nan))


if __name__ == "__main__":
    main()
