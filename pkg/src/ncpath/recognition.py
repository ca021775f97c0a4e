"""Certifying recognition for the non-crossing path classes.

Each answer carries evidence: members get a path model that is checked
against the input graph, non-members get a small forbidden induced subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .chordal import CliqueTree, Hole, chordality, clique_tree, is_hole
from .graph import Graph, GraphFormatError, is_connected, require_connected
from .model import CrossReport, NcModel, annotate
from .locality import localize, remap_paths

CLASSES = ("chordal", "nc-path-tree", "nc-path-rtree", "proper-interval")
# witness kinds that refute membership, per class
FORBIDDEN = {
    "chordal": ("Hole",),
    "nc-path-tree": ("Hole", "Claw"),
    "nc-path-rtree": ("Hole", "Claw", "ThreeSun"),
    "proper-interval": ("Hole", "Claw", "ThreeSun", "Net"),
}


class NotChordalError(ValueError):
    def __init__(self, hole):
        super().__init__(f"graph is not chordal: induced cycle {hole}")
        self.hole = hole


@dataclass(frozen=True)
class Witness:
    """A forbidden induced subgraph.

    Claw: ``[center, a, b, c]``. ThreeSun: inner triangle then outer triple,
    where outer i misses inner i. Net: triangle then pendants, pendant i hangs
    off triangle vertex i. Hole: the cycle in order.
    """

    kind: str
    vertices: list
    center: int = None

    def to_json(self):
        d = {"kind": self.kind, "vertices": [int(v) for v in self.vertices]}
        if self.center is not None:
            d["center"] = int(self.center)
        return d

    @classmethod
    def from_json(cls, d):
        return cls(d["kind"], list(d["vertices"]), d.get("center"))


@dataclass(frozen=True, eq=False)
class ModelPayload:
    """A host tree plus one node list per vertex (in path order when paths are claimed)."""

    size: int
    tree_edges: np.ndarray
    occ_ptr: np.ndarray
    nodes: np.ndarray
    root: int = -1
    host: str = "tree"

    def node_list(self, v):
        return self.nodes[self.occ_ptr[v]:self.occ_ptr[v + 1]].tolist()

    def to_json(self):
        return {
            "host_nodes": int(self.size),
            "host": self.host,
            "root": int(self.root),
            "tree_edges": np.asarray(self.tree_edges).tolist(),
            "paths": [self.node_list(v) for v in range(self.occ_ptr.shape[0] - 1)],
        }

    @classmethod
    def from_json(cls, d):
        paths = d["paths"]
        occ_ptr = np.zeros(len(paths) + 1, dtype=np.int64)
        np.cumsum([len(p) for p in paths], out=occ_ptr[1:])
        flat = np.array([x for p in paths for x in p], dtype=np.int64)
        edges = np.array(d["tree_edges"], dtype=np.int64).reshape(-1, 2)
        return cls(int(d["host_nodes"]), edges, occ_ptr, flat, int(d.get("root", -1)),
                   d.get("host", "tree"))

    @classmethod
    def from_model(cls, m: NcModel, host="tree", root=-1):
        return cls(m.tree.size, m.tree.tree_edges(), m.occ_ptr, m.path, root, host)

    @classmethod
    def from_clique_tree(cls, t: CliqueTree):
        order = np.argsort(t.cverts, kind="stable")
        node_of_slot = np.repeat(np.arange(t.size, dtype=np.int64), np.diff(t.cptr))
        occ_ptr = np.zeros(t.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(t.cverts, minlength=t.n), out=occ_ptr[1:])
        return cls(t.size, t.tree_edges(), occ_ptr, node_of_slot[order], -1, "subtrees")


@dataclass(frozen=True, eq=False)
class Certificate:
    target_class: str
    verdict: str
    payload: object
    model: object = field(default=None, repr=False)

    @property
    def member(self) -> bool:
        return self.verdict == "member"

    def to_json(self):
        d = {"class": self.target_class, "verdict": self.verdict}
        if isinstance(self.payload, Witness):
            d["witness"] = self.payload.to_json()
        else:
            d["model"] = self.payload.to_json()
        return d

    @classmethod
    def from_json(cls, d):
        if "witness" in d:
            payload = Witness.from_json(d["witness"])
        else:
            payload = ModelPayload.from_json(d["model"])
        return cls(d["class"], d["verdict"], payload)


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _first_outside(t: CliqueTree, x, y):
    """Smallest member of clique ``x`` that is not in clique ``y``."""
    diff = np.setdiff1d(t.clique(x), t.clique(y), assume_unique=True)
    return int(diff[0])


def extract_claw(g: Graph, t: CliqueTree, r: CrossReport) -> Witness:
    if r.kind == "non-path-vertex":
        v, x0 = r.vertex, r.node
        leaves = [_first_outside(t, x, x0) for x in r.nodes]
        w = Witness("Claw", [v] + leaves, v)
    else:
        cp, op = list(r.center_path), set(r.other_path)
        inside = [i for i, x in enumerate(cp) if x in op]
        i, j = inside[0], inside[-1]
        c1 = _first_outside(t, cp[i - 1], cp[i])
        c2 = _first_outside(t, cp[j + 1], cp[j])
        w = Witness("Claw", [r.vertex, r.other, c1, c2], r.vertex)
    assert check_witness(g, w).ok, f"claw extraction failed for {r}"
    return w


def find_claw_chordal(g: Graph):
    """``(claw, None)`` when a claw exists, else ``(None, model)``.

    Raises NotChordalError carrying a hole when ``g`` is not chordal.
    """
    require_connected(g)
    r = chordality(g)
    if isinstance(r, Hole):
        raise NotChordalError(r.cycle)
    t = clique_tree(g, r)
    m = annotate(t)
    if isinstance(m, CrossReport):
        return extract_claw(g, t, m), None
    return None, m


def three_sun(g: Graph, m: NcModel, piece) -> Witness:
    x, t0, t1, t2 = piece.nodes
    a01, a12, a20 = (c[0] for c in piece.classes)
    tr = m.tree
    outer = [_first_outside(tr, ti, x) for ti in (t0, t1, t2)]
    return Witness("ThreeSun", [a12, a20, a01] + outer)


def net(g: Graph, m: NcModel, x) -> Witness:
    tr = m.tree
    ys = tr.tree_adj[x][:3]
    inner = [int(m.separator(x, y)[0]) for y in ys]
    outer = [_first_outside(tr, y, x) for y in ys]
    return Witness("Net", inner + outer)


def recognize(g: Graph, target_class="nc-path-tree") -> Certificate:
    """Certified membership of a connected graph in ``target_class``.

    Large inputs are renamed for cache locality first; the returned
    certificate is always in the caller's vertex ids, and ``model`` is only
    attached when no renaming happened.
    """
    if target_class not in CLASSES:
        raise ValueError(f"unknown class {target_class!r}")
    require_connected(g)
    h, rl = localize(g)
    if rl is None:
        return _recognize(g, target_class)
    c = _recognize(h, target_class)
    if isinstance(c.payload, Witness):
        w = c.payload
        center = None if w.center is None else rl.to_old([w.center])[0]
        return Certificate(c.target_class, c.verdict, Witness(w.kind, rl.to_old(w.vertices), center))
    p = c.payload
    ptr, nodes = remap_paths(p.occ_ptr, p.nodes, rl)
    return Certificate(c.target_class, c.verdict, ModelPayload(p.size, p.tree_edges, ptr, nodes, p.root, p.host))


def _recognize(g: Graph, target_class) -> Certificate:
    r = chordality(g)
    if isinstance(r, Hole):
        return Certificate(target_class, "non-member", Witness("Hole", r.cycle))
    t = clique_tree(g, r)
    if target_class == "chordal":
        return Certificate(target_class, "member", ModelPayload.from_clique_tree(t), t)
    m = annotate(t)
    if isinstance(m, CrossReport):
        return Certificate(target_class, "non-member", extract_claw(g, t, m))
    if target_class == "nc-path-tree":
        return Certificate(target_class, "member", ModelPayload.from_model(m), m)
    junctions = m.junction_pieces()
    if junctions:
        return Certificate(target_class, "non-member", three_sun(g, m, junctions[0]))
    if target_class == "nc-path-rtree":
        root = int(m.terminals[0])
        return Certificate(target_class, "member", ModelPayload.from_model(m, "rtree", root), m)
    fat = np.flatnonzero(m.tree_deg >= 3)
    if fat.size:
        return Certificate(target_class, "non-member", net(g, m, int(fat[0])))
    return Certificate(target_class, "member", ModelPayload.from_model(m, "path"), m)


def _induced(g: Graph, vs):
    return [[g.has_edge(a, b) for b in vs] for a in vs]


def check_witness(g: Graph, w: Witness) -> Verification:
    vs = [int(v) for v in w.vertices]
    if any(not 0 <= v < g.n for v in vs) or len(set(vs)) != len(vs):
        return Verification(False, "witness vertices invalid or repeated")
    if w.kind == "Hole":
        return Verification(is_hole(g, vs), "" if is_hole(g, vs) else "not an induced cycle of length >= 4")
    want = {"Claw": 4, "ThreeSun": 6, "Net": 6}.get(w.kind)
    if want is None:
        return Verification(False, f"unknown witness kind {w.kind!r}")
    if len(vs) != want:
        return Verification(False, f"{w.kind} needs {want} vertices")
    a = _induced(g, vs)
    if w.kind == "Claw":
        if w.center is not None and w.center != vs[0]:
            return Verification(False, "claw center must be listed first")
        ok = all(a[0][i] for i in (1, 2, 3)) and not any(a[i][j] for i in (1, 2, 3) for j in (1, 2, 3) if i < j)
    elif w.kind == "ThreeSun":
        ok = a[0][1] and a[1][2] and a[0][2]
        ok = ok and not (a[3][4] or a[3][5] or a[4][5])
        ok = ok and all(a[3 + i][j] == (i != j) for i in range(3) for j in range(3))
    else:
        ok = a[0][1] and a[1][2] and a[0][2]
        ok = ok and not (a[3][4] or a[3][5] or a[4][5])
        ok = ok and all(a[3 + i][j] == (i == j) for i in range(3) for j in range(3))
    return Verification(bool(ok), "" if ok else f"vertices do not induce a {w.kind}")


def check_model(g: Graph, p: ModelPayload, paths=True, noncrossing=True) -> Verification:
    """Validate a tree model against ``g`` in near-linear time.

    The intersection graph is compared in two steps: every edge of ``g`` must
    join intersecting node sets, and the number of intersecting pairs, counted
    from clique and separator sizes, must equal ``m``.
    """
    k = int(p.size)
    n = g.n
    edges = np.asarray(p.tree_edges, dtype=np.int64).reshape(-1, 2)
    if k < 1 or edges.shape[0] != k - 1:
        return Verification(False, "host is not a tree (wrong edge count)")
    try:
        host = Graph.from_edges(k, edges)
    except GraphFormatError as e:
        return Verification(False, f"host is not a simple graph: {e}")
    if not is_connected(host):
        return Verification(False, "host tree is disconnected")
    root = int(p.root) if p.root is not None and p.root >= 0 else 0
    if root >= k:
        return Verification(False, "root outside host")
    par = kernels.bfs_parents(host.indptr, host.indices, root, np.zeros(k, dtype=np.bool_))
    occ_ptr = np.asarray(p.occ_ptr, dtype=np.int64)
    nodes = np.asarray(p.nodes, dtype=np.int64)
    if occ_ptr.shape[0] != n + 1 or occ_ptr[0] != 0 or occ_ptr[-1] != nodes.shape[0]:
        return Verification(False, "one node list per vertex required")
    plen = np.diff(occ_ptr)
    if (plen < 1).any():
        return Verification(False, f"vertex {int(np.argmax(plen < 1))} has an empty node set")
    if nodes.size and (nodes.min() < 0 or nodes.max() >= k):
        return Verification(False, "node id out of range")
    owner = np.repeat(np.arange(n, dtype=np.int64), plen)
    keys = np.sort(owner * k + nodes)
    if (np.diff(keys) == 0).any():
        return Verification(False, "repeated node in a vertex's set")

    def member(vs, xs):
        q = vs * k + xs
        i = np.searchsorted(keys, q)
        i[i >= keys.shape[0]] = 0
        return keys[i] == q

    pin = member(owner, par[nodes]) & (nodes != root)
    if not np.array_equal(np.bincount(owner, weights=pin, minlength=n).astype(np.int64), plen - 1):
        return Verification(False, "some node set is not connected in the host")
    if paths:
        same = owner[:-1] == owner[1:]
        a = nodes[:-1][same]
        b = nodes[1:][same]
        if not ((par[a] == b) | (par[b] == a)).all():
            return Verification(False, "some node list is not a path in the host")
    top = np.empty(n, dtype=np.int64)
    top[owner[~pin]] = nodes[~pin]
    e = g.edges()
    u, v = e[:, 0], e[:, 1]
    if not (member(v, top[u]) | member(u, top[v])).all():
        bad = int(np.argmin(member(v, top[u]) | member(u, top[v])))
        return Verification(False, f"edge {int(u[bad])}-{int(v[bad])} has disjoint node sets")
    cnt = np.bincount(nodes, minlength=k).astype(np.int64)
    sep = np.bincount(nodes[pin], minlength=k).astype(np.int64)
    pairs = int((cnt * (cnt - 1) // 2).sum() - (sep * (sep - 1) // 2).sum())
    if pairs != g.m:
        return Verification(False, f"model has {pairs} intersecting pairs, graph has {g.m} edges")
    e0 = nodes[occ_ptr[:-1]]
    e1 = nodes[occ_ptr[1:] - 1]
    if noncrossing:
        ok = (member(v, e0[u]) | member(v, e1[u])) & (member(u, e0[v]) | member(u, e1[v]))
        if not ok.all():
            bad = int(np.argmin(ok))
            return Verification(False, f"paths of {int(u[bad])} and {int(v[bad])} cross")
    if p.host == "rtree":
        if p.root < 0:
            return Verification(False, "rooted model without a root")
        if not ((top == e0) | (top == e1)).all():
            return Verification(False, "some path is not vertical from the root")
    if p.host == "path" and host.degree.max(initial=0) > 2:
        return Verification(False, "host is not a path")
    return Verification(True)


HOST_FOR_CLASS = {"chordal": "subtrees", "nc-path-tree": "tree", "nc-path-rtree": "rtree",
                  "proper-interval": "path"}


def verify_certificate(g: Graph, c: Certificate) -> Verification:
    if c.target_class not in CLASSES:
        return Verification(False, f"unknown class {c.target_class!r}")
    if c.verdict == "non-member":
        if not isinstance(c.payload, Witness):
            return Verification(False, "non-member verdict needs a witness")
        if c.payload.kind not in FORBIDDEN[c.target_class]:
            return Verification(False, f"{c.payload.kind} does not refute {c.target_class}")
        return check_witness(g, c.payload)
    if c.verdict != "member" or not isinstance(c.payload, ModelPayload):
        return Verification(False, "member verdict needs a model")
    want = HOST_FOR_CLASS[c.target_class]
    if c.payload.host != want:
        return Verification(False, f"{c.target_class} needs a '{want}' model, got '{c.payload.host}'")
    chordal_only = c.target_class == "chordal"
    return check_model(g, c.payload, paths=not chordal_only, noncrossing=not chordal_only)
