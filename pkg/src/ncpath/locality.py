"""Cache-friendly relabelling for large inputs.

Randomly numbered vertices turn every adjacency lookup into a cache miss once
the graph outgrows the cache. Large graphs are therefore renamed in
breadth-first order before the heavy passes run, and results are translated
back to the caller's ids. Small graphs are left alone so tie-breaking by
lowest id stays visible in their outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph

MIN_N = 1 << 12


@dataclass(frozen=True, eq=False)
class Relabeling:
    old_of_new: np.ndarray
    new_of_old: np.ndarray

    def to_old(self, vs) -> list:
        return self.old_of_new[np.asarray(vs, dtype=np.int64)].tolist()

    def to_new(self, vs) -> list:
        return self.new_of_old[np.asarray(vs, dtype=np.int64)].tolist()


def localize(g: Graph, min_n=MIN_N):
    """``(h, relabeling)`` with ``h`` renamed in BFS order, or ``(g, None)`` for small graphs."""
    if g.n < min_n:
        return g, None
    old_of_new = kernels.bfs_order(g.indptr, g.indices)
    new_of_old = np.empty_like(old_of_new)
    new_of_old[old_of_new] = np.arange(g.n, dtype=np.int64)
    ptr, ind = kernels.permute_csr(g.indptr, g.indices, old_of_new, new_of_old)
    return Graph(g.n, ptr, ind), Relabeling(old_of_new, new_of_old)


def remap_paths(occ_ptr, nodes, rl: Relabeling):
    """Per-vertex node lists re-indexed from new ids back to old ids."""
    lens_new = np.diff(occ_ptr)
    lens_old = lens_new[rl.new_of_old]
    ptr = np.zeros(lens_old.shape[0] + 1, dtype=np.int64)
    np.cumsum(lens_old, out=ptr[1:])
    shift = occ_ptr[rl.new_of_old] - ptr[:-1]
    idx = np.repeat(shift, lens_old) + np.arange(int(ptr[-1]), dtype=np.int64)
    return ptr, nodes[idx]
