"""Compiled kernels against their interpreted bodies on one generated instance.

    python3 benchmarks/bench_backends.py --n 20000

Each kernel is called through numba and through ``.py_func`` on the same
inputs; outputs are compared before timings are reported. With
NCPATH_DISABLE_NUMBA set both columns run the Python body.
"""

import argparse
import time

import numpy as np

from ncpath import _jit, kernels
from ncpath.graph import edge_ids
from ncpath.testkit.generators import GenSpec, gen


def _time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(g):
    order = kernels.lexbfs(g.indptr, g.indices, np.arange(g.n, dtype=np.int64))
    peo = order[::-1].copy()
    cptr, cverts, parent = kernels.clique_tree_arrays(g.indptr, g.indices, peo)
    eid, m = edge_ids(g)
    return [
        ("lexbfs", kernels.lexbfs, (g.indptr, g.indices, np.arange(g.n, dtype=np.int64))),
        ("peo_violation", kernels.peo_violation, (g.indptr, g.indices, peo)),
        ("clique_tree_arrays", kernels.clique_tree_arrays, (g.indptr, g.indices, peo)),
        ("vertex_paths", kernels.vertex_paths, (g.n, cptr, cverts, parent)),
        ("component_labels", kernels.component_labels, (g.indptr, g.indices)),
        ("biconnected", kernels.biconnected, (g.indptr, g.indices, eid, m)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    g = gen(GenSpec("random-host-tree-nc-paths", args.n, args.seed, {"biconnected": True}))
    print(f"backend={_jit.backend()} n={g.n} m={g.m}")
    print(f"{'kernel':<20}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for name, fn, a in cases(g):
        fn(*a)  # compile outside the timed region
        tc, oc = _time(fn, a, args.repeat)
        tp, op = _time(fn.py_func, a, 1)
        assert _same(oc, op), f"{name}: backends disagree"
        print(f"{name:<20}{tc:>12.4f}{tp:>12.4f}{tp / tc:>10.1f}")


if __name__ == "__main__":
    main()
