"""Hamiltonian cycles and paths, and spanning trees with few leaves.

A Hamiltonian cycle is read off an Euler tour of the trace multigraph: a
multigraph on the terminal nodes of the model whose edges carry disjoint
vertex paths of ``g``. Consecutive payloads meet inside one terminal clique,
so concatenating them along any Euler tour gives a cycle through all vertices.
Paths and spanning trees are glued block by block along the block-cutpoint
tree, using a variant of the trace that is walked as an Euler trail between
two cut vertices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .domination import build_model, run_localized
from .graph import Graph, block_cut_tree
from .model import AuxGraph, NcModel, build_aux_graph


class AuxNotBiconnected(ValueError):
    pass


@dataclass(frozen=True)
class SpanResult:
    kind: str
    sequence: list = None
    edges: list = None
    leaf_count: int = None

    def to_json(self):
        d = {"kind": self.kind}
        if self.sequence is not None:
            d["sequence"] = self.sequence
        if self.edges is not None:
            d["edges"] = self.edges
        if self.leaf_count is not None:
            d["leaf_count"] = self.leaf_count
        return d


@dataclass(frozen=True)
class NotBiconnected:
    """Obstruction to a Hamiltonian cycle: a cut vertex, or fewer than three vertices."""

    n: int
    cut_vertex: int = None

    def to_json(self):
        d = {"kind": "NotBiconnected", "n": self.n}
        if self.cut_vertex is not None:
            d["cut_vertex"] = self.cut_vertex
        return d


@dataclass(frozen=True)
class TooManyLeaves:
    leaf_count: int

    def to_json(self):
        return {"kind": "TooManyLeaves", "leaf_count": self.leaf_count}


@dataclass(frozen=True)
class TraceMultigraph:
    """Terminal nodes plus edges ``(u, v, kind, payload)``; payloads run from u to v."""

    nodes: list
    edges: list = field(default_factory=list)

    def degree(self):
        deg = defaultdict(int)
        for u, v, _, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return dict(deg)


def proper_interval_ham_path(a: AuxGraph) -> list:
    """Sentinel-to-sentinel Hamiltonian path: the span order itself."""
    lo, hi = a.lo, a.hi
    if a.size > 1 and not (lo[1:] <= hi[:-1]).all():
        raise ValueError("auxiliary graph is disconnected")
    return list(range(a.size))


def proper_interval_two_paths(a: AuxGraph):
    """Two internally disjoint u_1-u_k paths covering every aux vertex.

    Zigzag over the span order: one path takes the odd positions, the other
    the even ones. This works exactly when every vertex is adjacent to the one
    two steps ahead, which is 2-connectivity for proper interval orders.
    """
    N = a.size
    lo, hi = a.lo, a.hi
    if N < 4 or not (lo[2:] <= hi[:-2]).all():
        raise AuxNotBiconnected("auxiliary graph is not 2-connected")
    q1 = [0] + list(range(1, N, 2))
    q2 = list(range(0, N, 2))
    if q1[-1] != N - 1:
        q1.append(N - 1)
    else:
        q2.append(N - 1)
    return q1, q2


def _interior(a: AuxGraph, seq):
    return a.vertex_map[seq[1:-1]].tolist()


def build_trace(g: Graph, m: NcModel, route=None) -> TraceMultigraph:
    """The trace multigraph of ``m``.

    With ``route = (xa, xb, skip)`` the pieces between terminals ``xa`` and
    ``xb`` are single-tracked so that only xa and xb have odd degree, and the
    vertices in ``skip`` are left out of the self-loops.
    """
    on_route = {}
    skip = set()
    if route is not None:
        xa, xb, skip = route
        on_route = _route(m, xa, xb)
    edges = []
    for p in m.pieces:
        if p.kind == "path":
            a = build_aux_graph(m, p)
            z0, zk = p.nodes[0], p.nodes[-1]
            if p.index in on_route:
                hp = _interior(a, proper_interval_ham_path(a))
                edges.append((z0, zk, "terminal-pair-path", hp))
            else:
                q1, q2 = proper_interval_two_paths(a)
                edges.append((z0, zk, "terminal-pair-path", _interior(a, q1)))
                edges.append((z0, zk, "terminal-pair-path", _interior(a, q2)))
        else:
            t = p.nodes[1:]
            cls = {frozenset((t[0], t[1])): p.classes[0], frozenset((t[1], t[2])): p.classes[1],
                   frozenset((t[0], t[2])): p.classes[2]}
            if p.index in on_route:
                tin, tout = on_route[p.index]
                t3 = [x for x in t if x not in (tin, tout)][0]
                first = list(cls[frozenset((tin, tout))]) + list(cls[frozenset((tin, t3))])
                edges.append((tin, t3, "junction-hop", first))
                edges.append((t3, tout, "junction-hop", list(cls[frozenset((t3, tout))])))
            else:
                for i in range(3):
                    u, v = t[i], t[(i + 1) % 3]
                    edges.append((u, v, "junction-hop", list(cls[frozenset((u, v))])))
    for x in m.terminals.tolist():
        priv = [int(v) for v in m.privates(x).tolist() if v not in skip]
        if priv:
            edges.append((x, x, "self-loop", priv))
    return TraceMultigraph(m.terminals.tolist(), edges)


def _route(m: NcModel, xa, xb):
    """Pieces on the piece-tree path from terminal xa to terminal xb, with entry/exit terminals."""
    if xa == xb:
        return {}
    touch = defaultdict(list)
    for p in m.pieces:
        ts = p.nodes[1:] if p.kind == "junction" else (p.nodes[0], p.nodes[-1])
        for x in ts:
            touch[x].append(p)
    prev = {xa: None}
    queue = [xa]
    for x in queue:
        if x == xb:
            break
        for p in touch[x]:
            ts = p.nodes[1:] if p.kind == "junction" else (p.nodes[0], p.nodes[-1])
            for y in ts:
                if y not in prev:
                    prev[y] = (x, p)
                    queue.append(y)
    out = {}
    y = xb
    while prev[y] is not None:
        x, p = prev[y]
        out[p.index] = (x, y)
        y = x
    return out


def _euler(edges, start):
    """Hierholzer with an explicit stack; returns (edge id, forward) in walk order."""
    adj = defaultdict(list)
    for i, (u, v, _, _) in enumerate(edges):
        adj[u].append(i)
        if v != u:
            adj[v].append(i)
    used = [False] * len(edges)
    ptr = defaultdict(int)
    stack = [(start, -1, True)]
    out = []
    while stack:
        v = stack[-1][0]
        lst = adj[v]
        p = ptr[v]
        while p < len(lst) and used[lst[p]]:
            p += 1
        ptr[v] = p
        if p < len(lst):
            e = lst[p]
            used[e] = True
            u, w, _, _ = edges[e]
            stack.append((w if u == v else u, e, u == v))
        else:
            _, e, fwd = stack.pop()
            if e >= 0:
                out.append((e, fwd))
    out.reverse()
    if len(out) != len(edges):
        raise AssertionError("trace multigraph is disconnected")
    return out


def _walk(edges, start):
    seq = []
    for e, fwd in _euler(edges, start):
        payload = edges[e][3]
        seq.extend(payload if fwd else payload[::-1])
    return seq


def _span_back(r, rl):
    if isinstance(r, NotBiconnected):
        cut = None if r.cut_vertex is None else rl.to_old([r.cut_vertex])[0]
        return NotBiconnected(r.n, cut)
    if isinstance(r, TooManyLeaves):
        return r
    if r.sequence is not None:
        return SpanResult(r.kind, sequence=rl.to_old(r.sequence))
    edges = sorted(sorted(e) for e in rl.to_old(r.edges)) if r.edges else []
    return SpanResult(r.kind, edges=edges, leaf_count=r.leaf_count)


def _localized(g, fn):
    r, rl = run_localized(g, lambda h, _: fn(h, build_model(h)))
    return None if rl is None else _span_back(r, rl)


def _cycle_of_block(g: Graph, m: NcModel):
    if m.tree.size == 1:
        return list(range(g.n))
    tr = build_trace(g, m)
    return _walk(tr.edges, tr.nodes[0])


def hamiltonian_cycle(g: Graph, model: NcModel = None):
    if model is None and (r := _localized(g, hamiltonian_cycle)) is not None:
        return r
    m = model if model is not None else build_model(g)
    if g.n < 3:
        return NotBiconnected(g.n)
    bct = block_cut_tree(g)
    if bct.cut_vertices:
        return NotBiconnected(g.n, bct.cut_vertices[0])
    return SpanResult("HamCycle", sequence=_cycle_of_block(g, m))


def _routed_path(g: Graph, m: NcModel, a, b):
    """Hamiltonian a-b path in a 2-connected block where a and b are private at terminals."""
    xa = int(m.path_of(a)[0])
    xb = int(m.path_of(b)[0])
    assert m.path_of(a).shape[0] == 1 and m.path_of(b).shape[0] == 1, "cut vertex spans several cliques"
    skip = {a, b}
    rest_a = [int(v) for v in m.privates(xa).tolist() if v not in skip]
    rest_b = [int(v) for v in m.privates(xb).tolist() if v not in skip] if xb != xa else []
    skip |= set(rest_a) | set(rest_b)
    if m.tree.size == 1:
        return [a] + rest_a + [b]
    tr = build_trace(g, m, route=(xa, xb, skip))
    return [a] + rest_a + _walk(tr.edges, xa) + rest_b + [b]


def _block_sequences(g: Graph, bct):
    """Per block, a Hamiltonian path of the block (in original ids).

    Leaf blocks end at their cut vertex; other blocks run between their two
    smallest cut vertices.
    """
    out = []
    for verts, cuts in zip(bct.blocks, bct.block_cuts):
        if len(verts) == 2:
            if len(cuts) == 1:
                other = verts[0] if verts[1] == cuts[0] else verts[1]
                out.append([other, cuts[0]])
            else:
                out.append(list(verts))
            continue
        sub, old = g.subgraph(verts)
        local = {v: i for i, v in enumerate(verts)}
        m = build_model(sub)
        if len(cuts) == 1:
            cyc = _cycle_of_block(sub, m)
            i = cyc.index(local[cuts[0]])
            seq = cyc[i + 1:] + cyc[:i + 1]
        else:
            seq = _routed_path(sub, m, local[cuts[0]], local[cuts[1]])
        out.append(old[seq].tolist())
    return out


def hamiltonian_path(g: Graph, model: NcModel = None):
    if model is None and (r := _localized(g, hamiltonian_path)) is not None:
        return r
    m = model if model is not None else build_model(g)
    if g.n <= 2:
        return SpanResult("HamPath", sequence=list(range(g.n)))
    bct = block_cut_tree(g)
    if bct.leaf_count > 2:
        return TooManyLeaves(bct.leaf_count)
    if not bct.cut_vertices:
        cyc = _cycle_of_block(g, m)
        return SpanResult("HamPath", sequence=cyc)
    seqs = _block_sequences(g, bct)
    order = bct.block_path()
    path = []
    for i, bi in enumerate(order):
        s = seqs[bi]
        if i == 0:
            # the first block must end where the next one starts
            nxt = set(bct.block_cuts[order[1]])
            if s[-1] not in nxt:
                s = s[::-1]
            path.extend(s)
        else:
            if s[0] != path[-1]:
                s = s[::-1]
            assert s[0] == path[-1]
            path.extend(s[1:])
    return SpanResult("HamPath", sequence=path)


def min_leaf_spanning_tree(g: Graph, model: NcModel = None) -> SpanResult:
    """Spanning tree whose leaves are one per leaf block (two when 2-connected)."""
    if model is None and (r := _localized(g, min_leaf_spanning_tree)) is not None:
        return r
    m = model if model is not None else build_model(g)
    if g.n == 1:
        return SpanResult("SpanningTree", edges=[], leaf_count=0)
    bct = block_cut_tree(g)
    if not bct.cut_vertices:
        hp = hamiltonian_path(g, m).sequence
        edges = [sorted(e) for e in zip(hp, hp[1:])]
    else:
        edges = []
        for s in _block_sequences(g, bct):
            edges.extend(sorted(e) for e in zip(s, s[1:]))
    edges.sort()
    deg = np.bincount(np.asarray(edges, dtype=np.int64).ravel(), minlength=g.n)
    return SpanResult("SpanningTree", edges=[list(map(int, e)) for e in edges],
                      leaf_count=int((deg == 1).sum()))


def validate_span(g: Graph, r: SpanResult) -> bool:
    """Structural check of a cycle, path or spanning tree against ``g``."""
    if r.kind in ("HamCycle", "HamPath"):
        s = r.sequence
        if sorted(s) != list(range(g.n)):
            return False
        pairs = list(zip(s, s[1:]))
        if r.kind == "HamCycle":
            if g.n < 3:
                return False
            pairs.append((s[-1], s[0]))
        return all(g.has_edge(u, v) for u, v in pairs)
    if r.kind == "SpanningTree":
        e = r.edges
        if len(e) != g.n - 1 or not all(g.has_edge(u, v) for u, v in e):
            return False
        t = Graph.from_edges(g.n, e) if e else Graph.from_edges(g.n, [])
        from .graph import is_connected
        if not is_connected(t):
            return False
        return int((t.degree == 1).sum()) == r.leaf_count
    return False
