"""Seeded instance generators.

Randomness comes from numpy's ``default_rng`` (PCG64), so a (kind, n, seed,
params) tuple reproduces the same graph on any platform running the same
numpy bit generator.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from ..graph import Graph

KINDS = ("random-host-tree-nc-paths", "random-proper-interval", "random-chordal", "exhaustive-small")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def header(self) -> str:
        return json.dumps({"kind": self.kind, "n": self.n, "seed": self.seed, "params": self.params},
                          sort_keys=True)


class GenError(ValueError):
    pass


def _pairs_within_groups(keys, vals, n):
    """Edges joining every two values that share a key (deduplicated)."""
    order = np.lexsort((vals, keys))
    keys = keys[order]
    vals = vals[order]
    if keys.shape[0] == 0:
        return np.empty((0, 2), dtype=np.int64)
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    ends = np.r_[starts[1:], keys.shape[0]]
    size = ends - starts
    grp_end = np.repeat(ends, size)
    pos = np.arange(keys.shape[0])
    cnt = grp_end - pos - 1
    total = int(cnt.sum())
    src = np.repeat(pos, cnt)
    first = np.repeat(np.cumsum(cnt) - cnt, cnt)
    dst = src + 1 + (np.arange(total) - first)
    a = vals[src]
    b = vals[dst]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    keep = lo != hi
    key = np.unique(lo[keep] * n + hi[keep])
    return np.stack([key // n, key % n], axis=1)


def _relabel(n, edges, rng):
    perm = rng.permutation(n)
    if edges.shape[0] == 0:
        return edges
    return perm[edges]


def intersection_graph(n, node_of, vertex_of) -> Graph:
    """Graph on ``n`` vertices where two vertices are adjacent iff they share a node."""
    node_of = np.asarray(node_of, dtype=np.int64)
    vertex_of = np.asarray(vertex_of, dtype=np.int64)
    return Graph.from_edges(n, _pairs_within_groups(node_of, vertex_of, n))


def _proper_intervals(rng, k, r):
    """``r`` pairwise non-nested intervals on positions 0..k-1 covering every edge (r >= k-1)."""
    base_lo = np.arange(k - 1)
    extra = r - (k - 1)
    lo = rng.integers(0, k, size=extra)
    length = rng.geometric(0.5, size=extra) - 1
    lo = np.concatenate([base_lo, lo])
    hi = np.concatenate([base_lo + 1, np.minimum(lo[k - 1:] + length, k - 1)])
    order = np.lexsort((hi, lo))
    lo = lo[order]
    hi = np.maximum.accumulate(hi[order])
    return lo, hi


def _nc_host_tree(n, rng, p):
    """Occurrence lists (node, vertex) for a random NC-path-tree graph on exactly n vertices.

    Knobs: ``junction_prob`` and ``private_prob`` weight the next piece grown
    at a random terminal, ``max_piece_len`` bounds path pieces, ``twins``
    copies every vertex path, and ``max_extra`` (unset by default) caps the
    intervals a path piece gets beyond the minimum needed to span it.
    """
    jprob = float(p.get("junction_prob", 0.25))
    max_len = int(p.get("max_piece_len", 6))
    priv_prob = float(p.get("private_prob", 0.15))
    twins = int(p.get("twins", 1))
    max_extra = p.get("max_extra")
    if twins < 1 or max_len < 2:
        raise GenError("twins must be >= 1 and max_piece_len >= 2")
    budget = n // twins
    if budget < 1:
        raise GenError("n smaller than the twin multiplicity")
    nodes_n = 1
    terminals = [0]
    occ_nodes = []
    occ_verts = []
    v = 0

    def add(path_nodes):
        nonlocal v
        occ_nodes.append(np.asarray(path_nodes, dtype=np.int64))
        occ_verts.append(np.full(len(path_nodes), v, dtype=np.int64))
        v += 1

    add([0])
    left = budget - 1
    while left > 0:
        t0 = terminals[int(rng.integers(len(terminals)))]
        u = rng.random()
        if u < priv_prob:
            add([t0])
            left -= 1
        elif u < priv_prob + jprob and left >= 5:
            x, t1, t2 = nodes_n, nodes_n + 1, nodes_n + 2
            nodes_n += 3
            terminals += [t1, t2]
            sizes = 1 + rng.multinomial(min(left - 5, int(rng.integers(0, 4))), [1 / 3] * 3)
            for (a, b), s in zip(((t0, t1), (t1, t2), (t0, t2)), sizes):
                for _ in range(s):
                    add([a, x, b])
            # a private vertex at each new terminal keeps its clique maximal
            add([t1])
            add([t2])
            left -= int(sizes.sum()) + 2
        else:
            if max_extra is None:
                r = int(rng.integers(1, min(left, 2 * max_len) + 1))
                k = int(rng.integers(2, min(max_len, r + 1) + 1))
            else:
                # few intervals beyond the k - 1 needed to span the piece: many cut vertices
                k = int(rng.integers(2, min(max_len, left + 1) + 1))
                r = min(left, k - 1 + int(rng.integers(0, max_extra + 1)))
            z = np.r_[t0, nodes_n:nodes_n + k - 1]
            nodes_n += k - 1
            terminals.append(int(z[-1]))
            lo, hi = _proper_intervals(rng, k, r)
            for a, b in zip(lo.tolist(), hi.tolist()):
                add(z[a:b + 1])
            left -= r
    nodes = np.concatenate(occ_nodes)
    verts = np.concatenate(occ_verts)
    rem = n - budget * twins
    if twins > 1 or rem:
        # copies of whole paths make true twins; the remainder twins the first few vertices
        copies = np.full(budget, twins, dtype=np.int64)
        np.add.at(copies, np.arange(rem) % budget, 1)
        lens = np.bincount(verts, minlength=budget)
        idx = np.repeat(np.arange(budget), copies)
        new_ids = np.arange(idx.shape[0])
        starts = np.r_[0, np.cumsum(lens)[:-1]]
        seg_nodes = [nodes[starts[i]:starts[i] + lens[i]] for i in idx.tolist()]
        nodes = np.concatenate(seg_nodes)
        verts = np.repeat(new_ids, lens[idx])
    return nodes, verts


def _gen_nc(spec: GenSpec, rng) -> Graph:
    n = spec.n
    p = dict(spec.params)
    if p.get("biconnected"):
        p["twins"] = max(2, int(p.get("twins", 2)))
        if n < 3:
            raise GenError("a biconnected instance needs n >= 3")
    if n == 1:
        return Graph.from_edges(1, [])
    nodes, verts = _nc_host_tree(n, rng, p)
    g = intersection_graph(n, nodes, verts)
    return Graph.from_edges(n, _relabel(n, g.edges(), rng))


def proper_interval_edges(n, rng, max_len=4):
    lo = np.sort(rng.integers(0, max(1, n // 2), size=n))
    hi = lo + rng.integers(1, max_len + 1, size=n)
    hi = np.maximum.accumulate(hi)
    # close gaps so the graph is connected
    lo[1:] = np.minimum(lo[1:], hi[:-1])
    lo = np.maximum.accumulate(lo)
    last = np.searchsorted(lo, hi, side="right") - 1
    cnt = last - np.arange(n)
    src = np.repeat(np.arange(n), cnt)
    first = np.repeat(np.cumsum(cnt) - cnt, cnt)
    dst = src + 1 + (np.arange(int(cnt.sum())) - first)
    return np.stack([src, dst], axis=1)


def _gen_proper_interval(spec: GenSpec, rng) -> Graph:
    n = spec.n
    e = proper_interval_edges(n, rng, int(spec.params.get("max_len", 4)))
    return Graph.from_edges(n, _relabel(n, e, rng))


def _gen_chordal(spec: GenSpec, rng) -> Graph:
    """Intersection graph of random subtrees of a random tree."""
    n = spec.n
    if n == 1:
        return Graph.from_edges(1, [])
    hosts = max(2, int(spec.params.get("host_nodes", max(2, n // 2))))
    parent = np.r_[-1, [int(rng.integers(0, i)) for i in range(1, hosts)]]
    adj = [[] for _ in range(hosts)]
    for c in range(1, hosts):
        adj[c].append(int(parent[c]))
        adj[int(parent[c])].append(c)
    max_sub = int(spec.params.get("max_subtree", 4))
    sub = []
    for v in range(n):
        start = 0 if v == 0 else int(rng.integers(hosts))
        s = {start}
        frontier = [start]
        want = int(rng.integers(1, max_sub + 1))
        while len(s) < want and frontier:
            x = frontier[int(rng.integers(len(frontier)))]
            nb = [y for y in adj[x] if y not in s]
            if not nb:
                frontier.remove(x)
                continue
            y = nb[int(rng.integers(len(nb)))]
            s.add(y)
            frontier.append(y)
        sub.append(s)
    holders = [[] for _ in range(hosts)]
    for v, s in enumerate(sub):
        for x in s:
            holders[x].append(v)
    # cover host edges top-down so the intersection graph is connected
    for c in range(1, hosts):
        a = int(parent[c])
        if set(holders[a]) & set(holders[c]):
            continue
        v = holders[a][int(rng.integers(len(holders[a])))]
        sub[v].add(c)
        holders[c].append(v)
    nodes = np.array([x for s in sub for x in s], dtype=np.int64)
    verts = np.array([v for v, s in enumerate(sub) for _ in s], dtype=np.int64)
    g = intersection_graph(n, nodes, verts)
    return Graph.from_edges(n, _relabel(n, g.edges(), rng))


@lru_cache(maxsize=None)
def _graph8():
    import networkx as nx

    raw = resources.files(__package__).joinpath("data/connected8.g6.gz").read_bytes()
    lines = gzip.decompress(raw).split()
    return [nx.from_graph6_bytes(line) for line in lines]


def exhaustive_small(n, connected=True) -> list:
    """All graphs on ``n`` vertices up to isomorphism (connected ones by default)."""
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    if n <= 7:
        gs = [G for G in graph_atlas_g() if G.number_of_nodes() == n]
        if connected:
            gs = [G for G in gs if n == 0 or nx.is_connected(G)]
    elif n == 8:
        if not connected:
            raise GenError("only connected graphs are shipped for n = 8")
        gs = _graph8()
    else:
        raise GenError("exhaustive enumeration is limited to n <= 8")
    return [Graph.from_edges(n, sorted(tuple(sorted(e)) for e in G.edges())) for G in gs]


def gen(spec: GenSpec) -> Graph:
    if spec.n < 1:
        raise GenError("n must be at least 1")
    if spec.kind == "exhaustive-small":
        gs = exhaustive_small(spec.n, bool(spec.params.get("connected", True)))
        return gs[spec.seed % len(gs)]
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "random-host-tree-nc-paths":
        return _gen_nc(spec, rng)
    if spec.kind == "random-proper-interval":
        return _gen_proper_interval(spec, rng)
    if spec.kind == "random-chordal":
        return _gen_chordal(spec, rng)
    raise GenError(f"unknown generator kind {spec.kind!r}")
