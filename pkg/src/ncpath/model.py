"""The clique tree read as a model of non-crossing paths.

Every vertex ``v`` owns the path ``P_v`` of cliques that contain it. Nodes are
classified as terminal (every path through them ends there), junction (no path
ends there) or mixed. The tree's edges split into junction stars and
terminal-to-terminal paths, and every vertex path lives inside one such piece,
which is what makes the piecewise algorithms downstream possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .chordal import CliqueTree
from .graph import Graph

TERMINAL, MIXED, JUNCTION = 0, 1, 2
NODE_CLASS_NAMES = ("terminal", "mixed", "junction")

CROSS_KINDS = (
    "non-path-vertex",
    "mixed-high-degree",
    "fat-junction",
    "junction-bad-neighbor",
    "proper-interval-failure",
)


@dataclass(frozen=True)
class CrossReport:
    """Why a clique tree is not a non-crossing path model.

    For ``non-path-vertex``, ``vertex`` occupies ``node`` together with the
    three neighbouring nodes listed in ``nodes``. For the other kinds,
    ``vertex`` and ``other`` are a crossing pair: the intersection of their
    paths sits strictly inside ``center_path``, away from both of its ends.
    """

    kind: str
    node: int
    vertex: int
    other: int = -1
    nodes: tuple = ()
    center_path: tuple = ()
    other_path: tuple = ()


@dataclass(frozen=True, eq=False)
class Piece:
    """A junction star or a terminal-to-terminal path of the clique tree.

    Path pieces list ``nodes`` as z_0..z_{k-1} and carry the vertices living
    strictly inside (``verts``), each with the span ``[lo, hi]`` of positions
    it covers; the arrays are sorted by (lo, hi, id). Junction pieces list
    ``(center, t0, t1, t2)`` and ``classes`` holds the three twin classes of
    the center, for the terminal pairs (t0,t1), (t1,t2), (t2,t0).
    """

    index: int
    kind: str
    nodes: tuple
    verts: np.ndarray
    lo: np.ndarray = None
    hi: np.ndarray = None
    classes: tuple = ()

    @property
    def k(self) -> int:
        return len(self.nodes) if self.kind == "path" else 0

    @property
    def ends(self):
        return (self.nodes[0], self.nodes[-1]) if self.kind == "path" else None

    def to_json(self):
        if self.kind == "junction":
            return {"kind": "junction-star", "center": self.nodes[0],
                    "terminals": list(self.nodes[1:]),
                    "classes": [list(map(int, c)) for c in self.classes]}
        return {"kind": "terminal-path", "nodes": list(self.nodes)}


@dataclass(frozen=True, eq=False)
class NcModel:
    tree: CliqueTree
    occ_ptr: np.ndarray
    path: np.ndarray
    path_deg: np.ndarray
    slot_pos: np.ndarray
    node_class: np.ndarray
    tree_deg: np.ndarray
    pieces: list
    vpiece: np.ndarray
    vlo: np.ndarray
    vhi: np.ndarray
    priv_ptr: np.ndarray
    priv: np.ndarray

    @property
    def n(self) -> int:
        return self.tree.n

    def path_of(self, v) -> np.ndarray:
        return self.path[self.occ_ptr[v]:self.occ_ptr[v + 1]]

    def path_ends(self, v):
        return int(self.path[self.occ_ptr[v]]), int(self.path[self.occ_ptr[v + 1] - 1])

    def roles(self, v) -> list:
        """Per occurrence along ``P_v``: 'leaf' at its ends, 'internal' otherwise."""
        d = self.path_deg[self.occ_ptr[v]:self.occ_ptr[v + 1]]
        return ["leaf" if x <= 1 else "internal" for x in d.tolist()]

    def privates(self, x) -> np.ndarray:
        """Vertices whose whole path is the single node ``x``."""
        return self.priv[self.priv_ptr[x]:self.priv_ptr[x + 1]]

    @cached_property
    def terminals(self) -> np.ndarray:
        return np.flatnonzero(self.node_class == TERMINAL)

    @cached_property
    def junctions(self) -> np.ndarray:
        return np.flatnonzero(self.node_class == JUNCTION)

    @cached_property
    def separators(self):
        """CSR over tree edges keyed by child node: the members of G_child ∩ G_parent."""
        return _separators(self.tree, self.occ_ptr, self.path)

    def separator(self, x, y) -> np.ndarray:
        ptr, verts = self.separators
        c = x if self.tree.parent[x] == y else y
        return verts[ptr[c]:ptr[c + 1]]

    def path_pieces(self) -> list:
        return [p for p in self.pieces if p.kind == "path"]

    def junction_pieces(self) -> list:
        return [p for p in self.pieces if p.kind == "junction"]

    def to_json(self) -> dict:
        t = self.tree
        return {
            "nodes": t.cliques,
            "tree_edges": t.tree_edges().tolist(),
            "node_class": [NODE_CLASS_NAMES[c] for c in self.node_class.tolist()],
            "paths": [self.path_of(v).tolist() for v in range(self.n)],
            "pieces": [p.to_json() for p in self.pieces],
        }


_DOT_SHAPE = ("box", "circle", "triangle")


def to_dot(m: NcModel) -> str:
    """Graphviz rendering: node shape by class, each tree edge labelled with the paths crossing it."""
    t = m.tree
    out = ["graph ncmodel {"]
    for x in range(t.size):
        members = " ".join(map(str, t.clique(x).tolist()))
        out.append(f'  {x} [shape={_DOT_SHAPE[int(m.node_class[x])]}, label="{x}: {members}"];')
    for p, c in t.tree_edges().tolist():
        sep = " ".join(map(str, m.separator(p, c).tolist()))
        out.append(f'  {p} -- {c} [label="{sep}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def _separators(t: CliqueTree, occ_ptr, path):
    n = t.n
    owner = np.repeat(np.arange(n, dtype=np.int64), np.diff(occ_ptr))
    same = owner[:-1] == owner[1:]
    a = path[:-1][same]
    b = path[1:][same]
    who = owner[:-1][same]
    eid = np.where(t.parent[a] == b, a, b)
    order = np.argsort(eid, kind="stable")
    ptr = np.zeros(t.size + 1, dtype=np.int64)
    np.cumsum(np.bincount(eid, minlength=t.size), out=ptr[1:])
    return ptr, who[order]


def _tree_csr(parent):
    k = parent.shape[0]
    child = np.flatnonzero(parent >= 0)
    src = np.concatenate([parent[child], child])
    dst = np.concatenate([child, parent[child]])
    order = np.lexsort((dst, src))
    ptr = np.zeros(k + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=k), out=ptr[1:])
    return ptr, dst[order]


def crossing_center(pa, pb):
    """Which of two tree paths has the intersection strictly inside it.

    Returns 0 for ``pa``, 1 for ``pb``, None when the paths do not cross.
    """
    sb = set(pb)
    hit = [x in sb for x in pa]
    if not any(hit):
        return None
    if not hit[0] and not hit[-1]:
        return 0
    sa = set(pa)
    if pb[0] not in sa and pb[-1] not in sa:
        return 1
    return None


class _Annotator:
    def __init__(self, t: CliqueTree):
        self.t = t
        status, bad_v, bad_x, occ_ptr, path, pdeg, slot_pos = kernels.vertex_paths(
            t.n, t.cptr, t.cverts, t.parent)
        self.status = status
        self.bad = (int(bad_v), int(bad_x))
        self.occ_ptr = occ_ptr
        self.path = path
        self.pdeg = pdeg
        self.slot_pos = slot_pos

    def path_list(self, v):
        return self.path[self.occ_ptr[v]:self.occ_ptr[v + 1]].tolist()

    def local_types(self, x):
        t = self.t
        out = []
        for s in range(t.cptr[x], t.cptr[x + 1]):
            w = int(t.cverts[s])
            p = self.slot_pos[s]
            nb = []
            if p > self.occ_ptr[w]:
                nb.append(int(self.path[p - 1]))
            if p + 1 < self.occ_ptr[w + 1]:
                nb.append(int(self.path[p + 1]))
            out.append((w, tuple(sorted(nb))))
        return out

    def crossing_report(self, kind, node, a, b, extra=()):
        pa = self.path_list(a)
        pb = self.path_list(b)
        c = crossing_center(pa, pb)
        assert c is not None, "reported pair does not cross"
        if c == 1:
            a, b, pa, pb = b, a, pb, pa
        return CrossReport(kind, int(node), int(a), int(b), tuple(extra), tuple(pa), tuple(pb))

    def local_crossing(self, kind, x):
        """A vertex passing through ``x`` plus one avoiding both of its neighbours there."""
        types = self.local_types(x)
        cnt = {}
        pair_cnt = {}
        for _, s in types:
            for y in s:
                cnt[y] = cnt.get(y, 0) + 1
            if len(s) == 2:
                pair_cnt[s] = pair_cnt.get(s, 0) + 1
        total = len(types)
        for s, c in sorted(pair_cnt.items()):
            if cnt[s[0]] + cnt[s[1]] - c < total:
                a = min(w for w, sw in types if sw == s)
                b = min(w for w, sw in types if not set(sw) & set(s))
                return self.crossing_report(kind, x, a, b)
        return None

    def pair_search(self, kind, node, cand, extra=()):
        """Exact crossing test over candidate vertices, one per local signature first."""
        reps = {}
        for w, sig in cand:
            reps.setdefault(sig, w)
        for pool in (sorted(reps.values()), sorted({w for w, _ in cand})):
            paths = {w: self.path_list(w) for w in pool}
            for i, a in enumerate(pool):
                for b in pool[i + 1:]:
                    if crossing_center(paths[a], paths[b]) is not None:
                        return self.crossing_report(kind, node, a, b, extra)
        return None


def annotate(t: CliqueTree):
    """Annotate ``t`` as a non-crossing path model, or explain why it is not one."""
    an = _Annotator(t)
    k = t.size
    if an.status == 2:
        raise ValueError(f"not a clique tree: cliques of vertex {an.bad[0]} are disconnected")
    tptr, tadj = _tree_csr(t.parent)
    tdeg = np.diff(tptr)
    if an.status == 1:
        v, x0 = an.bad
        slots = np.flatnonzero(t.cverts == v)
        mine = set((np.searchsorted(t.cptr, slots, side="right") - 1).tolist())
        nbrs = [int(y) for y in tadj[tptr[x0]:tptr[x0 + 1]] if int(y) in mine][:3]
        return CrossReport("non-path-vertex", int(x0), int(v), -1, tuple(nbrs))

    occ_ptr, path, pdeg = an.occ_ptr, an.path, an.pdeg
    leaf = pdeg <= 1
    nleaf = np.bincount(path, weights=leaf, minlength=k)
    nint = np.bincount(path, weights=~leaf, minlength=k)
    node_class = np.full(k, MIXED, dtype=np.int8)
    node_class[nint == 0] = TERMINAL
    node_class[nleaf == 0] = JUNCTION

    bad = np.flatnonzero((node_class == MIXED) & (tdeg >= 3))
    if bad.size:
        rep = an.local_crossing("mixed-high-degree", int(bad[0]))
        assert rep is not None
        return rep
    junc = np.flatnonzero(node_class == JUNCTION)
    bad = junc[tdeg[junc] != 3]
    if bad.size:
        rep = an.local_crossing("fat-junction", int(bad[0]))
        assert rep is not None
        return rep
    for x in junc.tolist():
        for y in tadj[tptr[x]:tptr[x + 1]].tolist():
            if node_class[y] != TERMINAL:
                cand = {}
                for w, s in an.local_types(x):
                    cand[w] = [s, None]
                for w, s in an.local_types(y):
                    cand.setdefault(w, [None, None])[1] = s
                cand = [(w, tuple(sig)) for w, sig in cand.items()]
                rep = an.pair_search("junction-bad-neighbor", x, cand, (y,))
                assert rep is not None, "no crossing found next to a junction"
                return rep

    pieces, edge_piece, edge_idx, node_piece, node_pos = _partition(t, node_class, tptr, tadj)
    n = t.n
    plen = np.diff(occ_ptr)
    owner = np.repeat(np.arange(n, dtype=np.int64), plen)
    vpiece = np.full(n, -1, dtype=np.int64)
    vlo = np.zeros(n, dtype=np.int64)
    vhi = np.zeros(n, dtype=np.int64)
    long = np.flatnonzero(plen >= 2)
    if long.size:
        same = owner[:-1] == owner[1:]
        a = path[:-1][same]
        b = path[1:][same]
        eid = np.where(t.parent[a] == b, a, b)
        starts = occ_ptr[long] - long
        idx = edge_idx[eid]
        vpiece[long] = edge_piece[eid[starts]]
        vlo[long] = np.minimum.reduceat(idx, starts)
        vhi[long] = np.maximum.reduceat(idx, starts) + 1
    single = np.flatnonzero(plen == 1)
    sx = path[occ_ptr[single]]
    mixed_single = node_class[sx] == MIXED
    vpiece[single[mixed_single]] = node_piece[sx[mixed_single]]
    vlo[single[mixed_single]] = node_pos[sx[mixed_single]]
    vhi[single[mixed_single]] = node_pos[sx[mixed_single]]
    term_single = single[node_class[sx] == TERMINAL]
    tx = path[occ_ptr[term_single]]
    order = np.argsort(tx, kind="stable")
    priv = term_single[order]
    priv_ptr = np.zeros(k + 1, dtype=np.int64)
    np.cumsum(np.bincount(tx, minlength=k), out=priv_ptr[1:])

    kind_is_path = np.array([p["kind"] == "path" for p in pieces] + [False], dtype=np.bool_)
    inpath = np.flatnonzero(kind_is_path[vpiece])
    order = inpath[np.lexsort((inpath, vhi[inpath], vlo[inpath], vpiece[inpath]))]
    inner, outer = kernels.nesting_violation(vpiece, vlo, vhi, order)
    if inner != -1:
        p = pieces[vpiece[inner]]
        return an.crossing_report("proper-interval-failure", p["nodes"][0], outer, inner,
                                  tuple(p["nodes"]))

    built = []
    cuts = np.searchsorted(vpiece[order], np.arange(len(pieces) + 1))
    injunction = np.flatnonzero(~kind_is_path[vpiece] & (vpiece >= 0))
    jorder = injunction[np.argsort(vpiece[injunction], kind="stable")]
    jcuts = np.searchsorted(vpiece[jorder], np.arange(len(pieces) + 1))
    for i, p in enumerate(pieces):
        if p["kind"] == "path":
            vs = order[cuts[i]:cuts[i + 1]]
            built.append(Piece(i, "path", tuple(p["nodes"]), vs, vlo[vs], vhi[vs]))
        else:
            vs = jorder[jcuts[i]:jcuts[i + 1]]
            t0, t1, t2 = p["nodes"][1:]
            slot = {(t0, t1): 0, (t1, t2): 1, (t0, t2): 2}
            classes = ([], [], [])
            for w in vs.tolist():
                e0 = int(path[occ_ptr[w]])
                e1 = int(path[occ_ptr[w + 1] - 1])
                classes[slot[(min(e0, e1), max(e0, e1))]].append(w)
            built.append(Piece(i, "junction", tuple(p["nodes"]), vs, classes=tuple(classes)))
    return NcModel(t, occ_ptr, path, pdeg, an.slot_pos, node_class, tdeg, built,
                   vpiece, vlo, vhi, priv_ptr, priv)


def _partition(t, node_class, tptr, tadj):
    """Junction stars, then maximal terminal-delimited paths (from the lower terminal)."""
    k = t.size
    parent = t.parent
    pieces = []
    edge_piece = np.full(k, -1, dtype=np.int64)
    edge_idx = np.zeros(k, dtype=np.int64)
    node_piece = np.full(k, -1, dtype=np.int64)
    node_pos = np.zeros(k, dtype=np.int64)
    cls = node_class.tolist()
    par = parent.tolist()
    ptr = tptr.tolist()
    adj = tadj.tolist()

    def eid(x, y):
        return x if par[x] == y else y

    for x in range(k):
        if cls[x] != JUNCTION:
            continue
        nb = sorted(adj[ptr[x]:ptr[x + 1]])
        for y in nb:
            edge_piece[eid(x, y)] = len(pieces)
        pieces.append({"kind": "junction", "nodes": (x, *nb)})
    used = edge_piece >= 0
    for x in range(k):
        if cls[x] != TERMINAL:
            continue
        for y in adj[ptr[x]:ptr[x + 1]]:
            e = eid(x, y)
            if used[e]:
                continue
            pid = len(pieces)
            seq = [x]
            prev, cur = x, y
            while True:
                e = eid(prev, cur)
                used[e] = True
                edge_piece[e] = pid
                edge_idx[e] = len(seq) - 1
                seq.append(cur)
                if cls[cur] != MIXED:
                    break
                node_piece[cur] = pid
                node_pos[cur] = len(seq) - 1
                a, b = adj[ptr[cur]:ptr[cur + 1]]
                prev, cur = cur, (b if a == prev else a)
            pieces.append({"kind": "path", "nodes": tuple(seq)})
    return pieces, edge_piece, edge_idx, node_piece, node_pos


def partition_edges(m: NcModel) -> list:
    return list(m.pieces)


@dataclass(frozen=True, eq=False)
class AuxGraph:
    """Interval graph standing in for one terminal path piece.

    Aux vertex 0 is the sentinel u_1, the last one is u_k; the rest are the
    piece's inner vertices in (lo, hi, id) order. Two aux vertices are adjacent
    exactly when their position spans overlap.
    """

    piece: Piece
    vertex_map: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    @property
    def size(self) -> int:
        return int(self.vertex_map.shape[0])

    @property
    def u1(self) -> int:
        return 0

    @property
    def uk(self) -> int:
        return self.size - 1

    def adjacent(self, i, j) -> bool:
        if i > j:
            i, j = j, i
        return self.lo[j] <= self.hi[i] and self.lo[i] <= self.hi[j]

    @cached_property
    def graph(self) -> Graph:
        lo = self.lo.tolist()
        hi = self.hi.tolist()
        edges = []
        for i in range(len(lo)):
            j = i + 1
            while j < len(lo) and lo[j] <= hi[i]:
                edges.append((i, j))
                j += 1
        return Graph.from_edges(len(lo), edges)


def build_aux_graph(m: NcModel, piece: Piece) -> AuxGraph:
    if piece.kind != "path":
        raise ValueError("auxiliary graphs exist for terminal paths only")
    last = piece.k - 1
    vm = np.concatenate([[-1], piece.verts, [-1]]).astype(np.int64)
    lo = np.concatenate([[0], piece.lo, [last]]).astype(np.int64)
    hi = np.concatenate([[0], piece.hi, [last]]).astype(np.int64)
    return AuxGraph(piece, vm, lo, hi)
