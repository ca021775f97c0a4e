"""Chordality certificates and clique trees."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .graph import Graph


@dataclass(frozen=True, eq=False)
class Peo:
    order: np.ndarray
    # set by chordality(), which has already run the check
    checked: bool = False

    @cached_property
    def rank(self) -> np.ndarray:
        r = np.empty_like(self.order)
        r[self.order] = np.arange(self.order.shape[0])
        return r


@dataclass(frozen=True)
class Hole:
    cycle: list


class InvalidPeo(ValueError):
    pass


def lexbfs_order(g: Graph, start=None, seed=None) -> np.ndarray:
    """Lex-BFS visit order.

    Ties are broken by vertex id unless ``seed`` is given, in which case a
    random initial order is used (so repeated calls give different orders).
    ``start`` forces the first vertex.
    """
    if seed is None:
        seq0 = np.arange(g.n, dtype=np.int64)
    else:
        seq0 = np.random.default_rng(seed).permutation(g.n).astype(np.int64)
    if start is not None and g.n:
        i = int(np.flatnonzero(seq0 == start)[0])
        seq0[[0, i]] = seq0[[i, 0]]
    return kernels.lexbfs(g.indptr, g.indices, seq0)


def is_peo(g: Graph, order) -> bool:
    order = np.asarray(order, dtype=np.int64)
    if order.shape[0] != g.n or not np.array_equal(np.sort(order), np.arange(g.n)):
        return False
    return kernels.peo_violation(g.indptr, g.indices, order)[0] == -1


def is_hole(g: Graph, cycle) -> bool:
    k = len(cycle)
    if k < 4 or len(set(cycle)) != k:
        return False
    if any(not 0 <= v < g.n for v in cycle):
        return False
    for i in range(k):
        for j in range(i + 1, k):
            want = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(cycle[i], cycle[j]) != want:
                return False
    return True


def _hole_through(g: Graph, v, p, w):
    """Induced cycle v, p, ..., w when p and w stay connected outside N[v]."""
    blocked = np.zeros(g.n, dtype=np.bool_)
    blocked[g.neighbors(v)] = True
    blocked[v] = True
    blocked[p] = False
    blocked[w] = False
    # a shortest p-w path in G - (N[v] - {p, w}) has no chords
    par = kernels.bfs_parents(g.indptr, g.indices, p, blocked)
    if par[w] == -1:
        return None
    path = [int(w)]
    while path[-1] != p:
        path.append(int(par[path[-1]]))
    path.reverse()
    return [int(v)] + path


def _any_hole(g: Graph):
    adj = g.adj
    for v in range(g.n):
        nb = adj[v]
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                if not g.has_edge(nb[i], nb[j]):
                    cyc = _hole_through(g, v, nb[i], nb[j])
                    if cyc is not None:
                        return cyc
    return None


def chordality(g: Graph, seed=None):
    """A perfect elimination ordering, or an induced cycle of length at least four."""
    order = lexbfs_order(g, seed=seed)[::-1].copy()
    v, p, w = kernels.peo_violation(g.indptr, g.indices, order)
    if v == -1:
        return Peo(order, checked=True)
    cyc = _hole_through(g, v, p, w)
    if cyc is None:
        # not expected for Lex-BFS orders; keep the certificate total anyway
        cyc = _any_hole(g)
    if cyc is None or not is_hole(g, cyc):
        raise AssertionError("hole extraction failed")
    return Hole(cyc)


@dataclass(frozen=True, eq=False)
class CliqueTree:
    """Clique tree in flat form.

    ``cptr``/``cverts`` hold the sorted member lists of every maximal clique,
    ``parent`` gives each node's parent (-1 at the root).
    """

    n: int
    cptr: np.ndarray
    cverts: np.ndarray
    parent: np.ndarray

    @property
    def size(self) -> int:
        return int(self.parent.shape[0])

    @property
    def total_size(self) -> int:
        return int(self.cverts.shape[0])

    def clique(self, x) -> np.ndarray:
        return self.cverts[self.cptr[x]:self.cptr[x + 1]]

    @cached_property
    def cliques(self) -> list:
        vals = self.cverts.tolist()
        ptr = self.cptr.tolist()
        return [vals[ptr[x]:ptr[x + 1]] for x in range(self.size)]

    def tree_edges(self) -> np.ndarray:
        child = np.flatnonzero(self.parent >= 0)
        return np.stack([self.parent[child], child], axis=1)

    @cached_property
    def tree_adj(self) -> list:
        adj = [[] for _ in range(self.size)]
        for p, c in self.tree_edges().tolist():
            adj[p].append(c)
            adj[c].append(p)
        for row in adj:
            row.sort()
        return adj

    @cached_property
    def occ(self) -> list:
        out = [[] for _ in range(self.n)]
        for x, members in enumerate(self.cliques):
            for v in members:
                out[v].append(x)
        return out

    def canonical(self):
        """Labelled-tree identity: sorted cliques and sorted clique-pair edges."""
        cl = self.cliques
        nodes = sorted(tuple(c) for c in cl)
        edges = sorted(tuple(sorted((tuple(cl[a]), tuple(cl[b])))) for a, b in self.tree_edges().tolist())
        return tuple(nodes), tuple(edges)


def clique_tree(g: Graph, peo) -> CliqueTree:
    trusted = isinstance(peo, Peo) and peo.checked and peo.order.shape[0] == g.n
    order = np.asarray(peo.order if isinstance(peo, Peo) else peo, dtype=np.int64)
    if not trusted and not is_peo(g, order):
        raise InvalidPeo("ordering is not a perfect elimination ordering")
    cptr, cverts, parent = kernels.clique_tree_arrays(g.indptr, g.indices, order)
    t = CliqueTree(g.n, cptr, cverts, parent)
    assert t.total_size <= g.n + 2 * g.m
    return t


def maximal_cliques(g: Graph, peo) -> list:
    return sorted(clique_tree(g, peo).cliques)
