"""Compare the compiled and pure-numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import timeit

import numpy as np

from eulerlagrange import _kernels_py, build_solution, find_el_points
from eulerlagrange.verify import circular_states

try:
    from eulerlagrange import _kernels
except ImportError:
    _kernels = None


def _rk4_case():
    sol = build_solution(2.0, 1.0)
    tracers = [(p.r4, p.r5) for p in find_el_points(sol).points]
    states = circular_states(sol, tracers)
    pos = np.array([s.position for s in states])
    vel = np.array([s.velocity for s in states])
    mass = np.array([s.mass for s in states])
    return pos, vel, mass, 2 * math.pi / 4096, 4096


def _residual_case(n=20_000):
    sol = build_solution(2.0, 1.0)
    rng = np.random.default_rng(0)
    probes = rng.uniform(-6, 6, size=(n, 2))
    return np.array(sol.primaries()), np.array(sol.masses), probes


def bench(repeat):
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["compiled"] = _kernels
    rk = _rk4_case()
    rr = _residual_case()
    out = {}
    for name, mod in backends.items():
        t_rk = min(timeit.repeat(lambda: mod.rk4_nbody(*rk, 1e-6), number=1, repeat=repeat))
        t_rr = min(timeit.repeat(lambda: mod.rotating_residuals(*rr), number=1, repeat=repeat))
        out[name] = (t_rk, t_rr)
    if len(backends) == 2:
        a = backends["python"].rk4_nbody(*rk, 1e-6)[0]
        b = backends["compiled"].rk4_nbody(*rk, 1e-6)[0]
        out["max_abs_diff_rk4"] = float(np.abs(a - b).max())
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    res = bench(args.repeat)
    print(f"{'backend':<10} {'rk4 1 period, 9 bodies (s)':>28} {'residuals, 20k probes (s)':>27}")
    for name in ("python", "compiled"):
        if name in res:
            t_rk, t_rr = res[name]
            print(f"{name:<10} {t_rk:>28.4f} {t_rr:>27.5f}")
    if "compiled" in res:
        (p_rk, p_rr), (c_rk, c_rr) = res["python"], res["compiled"]
        print(f"speedup    {p_rk / c_rk:>27.1f}x {p_rr / c_rr:>26.1f}x")
        print(f"max |pos_python - pos_compiled| after one period: {res['max_abs_diff_rk4']:.2e}")
    else:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
