"""Time the numba and numpy kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--sizes 100 200 400] [--repeat 3]

Both variants are run on identical inputs and their outputs compared, so a
speed number is only printed for results that agree.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from dyckcert import certyes, generators, kernels


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_closure(n, repeat, seed):
    inst = generators.random_instance(seed, n, density=2.0 / n)
    args = kernels.edge_csr(n, inst.edge_array())
    kernels.closure_numba(n, *args)  # compile outside the timing
    t_jit, a = best_of(lambda: kernels.closure_numba(n, *args), repeat)
    t_np, b = best_of(lambda: kernels.closure_numpy(n, *args), repeat)
    assert all(np.array_equal(x, y) for x, y in zip(a, b)), "closure backends disagree"
    facts = int(a[0].sum())
    return t_jit, t_np, f"{len(inst.edges)} edges, {facts} facts"


def bench_scheme(n, repeat):
    inst = generators.ladder_instance(n)
    ws = generators.ladder_scheme(n)
    adj = certyes._dense_adjacency(inst)
    args = (n, inst.s, inst.t, ws.axiom[0], ws.axiom[1], ws.u, ws.v, ws.kind, ws.a, ws.b,
            ws.label, adj)
    kernels.check_scheme_numba(*args)
    t_jit, a = best_of(lambda: kernels.check_scheme_numba(*args), repeat)
    t_np, b = best_of(lambda: kernels.check_scheme_numpy(*args), repeat)
    assert a[:3] == b[:3] and np.array_equal(a[3], b[3]), "checker backends disagree"
    return t_jit, t_np, f"{len(ws)} productions"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print(f"{'kernel':<10} {'n':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  detail")
    for n in a.sizes:
        for name, res in (("closure", bench_closure(n, a.repeat, a.seed)),
                          ("scheme", bench_scheme(n, a.repeat))):
            t_jit, t_np, detail = res
            print(f"{name:<10} {n:>6} {t_jit:>10.4f} {t_np:>10.4f} {t_np / t_jit:>8.1f}  {detail}")


if __name__ == "__main__":
    main()
