"""Graph substrate: CSR storage, parsing, connectivity, blocks and twins."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels


class GraphFormatError(ValueError):
    """Input text does not describe a simple graph in a supported format."""


class DisconnectedGraphError(ValueError):
    def __init__(self, u, v):
        super().__init__(f"graph is disconnected: vertices {u} and {v} lie in different components")
        self.u = int(u)
        self.v = int(v)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency is kept in CSR form with each row sorted; ``adj`` gives the same
    data as Python lists when that is more convenient.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n, edges) -> "Graph":
        n = int(n)
        if n < 0:
            raise GraphFormatError("negative vertex count")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            bad = e[(e < 0).any(axis=1) | (e >= n).any(axis=1)][0]
            raise GraphFormatError(f"vertex id out of range in edge {bad[0]} {bad[1]}")
        loops = e[:, 0] == e[:, 1]
        if loops.any():
            raise GraphFormatError(f"self-loop at vertex {e[loops][0, 0]}")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        key = lo * max(n, 1) + hi
        uniq, counts = np.unique(key, return_counts=True)
        if (counts > 1).any():
            k = uniq[counts > 1][0]
            raise GraphFormatError(f"duplicate edge {k // n} {k % n}")
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, np.ascontiguousarray(dst))

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        edges = [(u, v) for u, row in enumerate(adj) for v in row if u < v]
        return cls.from_edges(len(adj), edges)

    @property
    def m(self) -> int:
        return int(self.indices.shape[0] // 2)

    @cached_property
    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def adj(self) -> list:
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [ind[ptr[v]:ptr[v + 1]] for v in range(self.n)]

    def neighbors(self, v) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u, v) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.shape[0] and row[i] == v)

    def edges(self) -> np.ndarray:
        """Edge array of shape (m, 2) with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degree)
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    def subgraph(self, vertices):
        """Induced subgraph on ``vertices`` (listed order becomes the new ids).

        Returns ``(sub, old_ids)`` where ``old_ids[i]`` is the original id of
        new vertex ``i``.
        """
        old = np.asarray(vertices, dtype=np.int64)
        new = np.full(self.n, -1, dtype=np.int64)
        new[old] = np.arange(old.shape[0])
        e = self.edges()
        if e.size:
            a = new[e[:, 0]]
            b = new[e[:, 1]]
            keep = (a >= 0) & (b >= 0)
            e = np.stack([a[keep], b[keep]], axis=1)
        return Graph.from_edges(old.shape[0], e), old

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        h.update(self.indptr.tobytes())
        h.update(self.indices.tobytes())
        return h.hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash(self.digest())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def _parse_edge_list(lines):
    header = None
    edges = []
    for lineno, raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 2:
                raise GraphFormatError(f"line {lineno}: header must be 'n m'")
            header = _ints(tok, lineno)
            if header[0] < 0 or header[1] < 0:
                raise GraphFormatError(f"line {lineno}: negative counts in header")
            continue
        if len(tok) != 2:
            raise GraphFormatError(f"line {lineno}: edge line must be 'u v'")
        edges.append(_ints(tok, lineno))
    if header is None:
        raise GraphFormatError("missing 'n m' header")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header announces {header[1]} edges, found {len(edges)}")
    return header[0], edges


def _parse_dimacs(lines):
    header = None
    edges = []
    for lineno, raw in lines:
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "p":
            if header is not None or len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise GraphFormatError(f"line {lineno}: malformed problem line")
            header = _ints(tok[2:], lineno)
            continue
        if tok[0] == "e":
            if header is None:
                raise GraphFormatError(f"line {lineno}: edge before 'p edge' line")
            if len(tok) != 3:
                raise GraphFormatError(f"line {lineno}: edge line must be 'e u v'")
            u, v = _ints(tok[1:], lineno)
            if u < 1 or v < 1:
                raise GraphFormatError(f"line {lineno}: DIMACS ids are 1-based")
            edges.append((u - 1, v - 1))
            continue
        raise GraphFormatError(f"line {lineno}: unknown line type {tok[0]!r}")
    if header is None:
        raise GraphFormatError("missing 'p edge n m' line")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header announces {header[1]} edges, found {len(edges)}")
    return header[0], edges


def _fast_edge_list(text):
    # bulk path for large clean inputs; falls back to the line parser on anything odd
    if "#" in text:
        return None
    try:
        arr = np.array(text.split(), dtype=np.int64)
    except ValueError:
        return None
    if arr.shape[0] < 2 or arr.shape[0] != 2 + 2 * arr[1]:
        return None
    return int(arr[0]), arr[2:].reshape(-1, 2)


def parse_graph(text, fmt="edge-list") -> Graph:
    """Parse edge-list or DIMACS text (``fmt="auto"`` sniffs the first token)."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    if fmt == "auto":
        fmt = "edge-list"
        for raw in text.splitlines():
            tok = raw.split()
            if tok and tok[0] in ("p", "c", "e"):
                fmt = "dimacs"
                break
            if tok and not tok[0].startswith("#"):
                break
    if fmt == "edge-list":
        fast = _fast_edge_list(text) if len(text) > 1 << 16 else None
        if fast is not None:
            return Graph.from_edges(*fast)
        n, edges = _parse_edge_list(enumerate(text.splitlines(), 1))
    elif fmt == "dimacs":
        n, edges = _parse_dimacs(enumerate(text.splitlines(), 1))
    else:
        raise GraphFormatError(f"unknown format {fmt!r}")
    return Graph.from_edges(n, edges)


def serialize(g: Graph, header_comment=None) -> str:
    parts = []
    if header_comment:
        parts.extend(f"# {ln}" for ln in header_comment.splitlines())
    parts.append(f"{g.n} {g.m}")
    e = g.edges()
    if e.size:
        parts.append("\n".join(f"{u} {v}" for u, v in e.tolist()))
    return "\n".join(parts) + "\n"


def component_labels(g: Graph) -> np.ndarray:
    return kernels.component_labels(g.indptr, g.indices)


def connected_components(g: Graph) -> list:
    """Components as sorted vertex lists, ordered by smallest member."""
    if g.n == 0:
        return []
    lab = component_labels(g)
    order = np.argsort(lab, kind="stable")
    cuts = np.flatnonzero(np.diff(lab[order])) + 1
    return [part.tolist() for part in np.split(order, cuts)]


def require_connected(g: Graph):
    if g.n == 0:
        raise ValueError("empty graph")
    lab = component_labels(g)
    if lab.max() > 0:
        raise DisconnectedGraphError(0, int(np.flatnonzero(lab != 0)[0]))


def is_connected(g: Graph) -> bool:
    return g.n > 0 and int(component_labels(g).max()) == 0


@dataclass(frozen=True)
class BlockCutTree:
    blocks: list
    cut_vertices: list
    tree_edges: list
    leaf_count: int
    # per block, the cut vertices it contains (ascending)
    block_cuts: list = field(repr=False, default_factory=list)

    @property
    def is_path(self) -> bool:
        return self.leaf_count <= 2

    def leaf_blocks(self) -> list:
        return [i for i, c in enumerate(self.block_cuts) if len(c) == 1]

    def block_path(self) -> list:
        """Blocks in order along the tree when it is a path."""
        if len(self.blocks) == 1:
            return [0]
        if not self.is_path:
            raise ValueError("block-cutpoint tree is not a path")
        blocks_of = {}
        for c, b in self.tree_edges:
            blocks_of.setdefault(c, []).append(b)
        start = min(self.leaf_blocks())
        order = [start]
        prev_cut = None
        while True:
            cuts = [c for c in self.block_cuts[order[-1]] if c != prev_cut]
            if not cuts:
                return order
            c = cuts[0]
            nxt = [b for b in blocks_of[c] if b != order[-1]][0]
            order.append(nxt)
            prev_cut = c


def edge_ids(g: Graph):
    """Undirected edge id for every CSR slot, plus the edge count."""
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.degree)
    key = np.minimum(src, g.indices) * max(g.n, 1) + np.maximum(src, g.indices)
    _, eid = np.unique(key, return_inverse=True)
    return eid.astype(np.int64).reshape(-1), g.m


def block_cut_tree(g: Graph) -> BlockCutTree:
    require_connected(g)
    if g.n == 1:
        return BlockCutTree([[0]], [], [], 1, [[]])
    eid, m = edge_ids(g)
    edge_block, is_cut, nb = kernels.biconnected(g.indptr, g.indices, eid, m)
    e = g.edges()
    # edges() is sorted by (u, v), which is exactly the id order from np.unique
    ends = np.concatenate([e[:, 0], e[:, 1]])
    labs = np.concatenate([edge_block, edge_block])
    pairs = np.unique(labs * g.n + ends)
    pb = pairs // g.n
    pv = pairs % g.n
    cuts = pb.searchsorted(np.arange(nb + 1))
    blocks = [pv[cuts[i]:cuts[i + 1]].tolist() for i in range(nb)]
    # canonical order: by smallest member, then by size
    order = sorted(range(nb), key=lambda i: (blocks[i][0], len(blocks[i]), blocks[i]))
    blocks = [blocks[i] for i in order]
    cutset = set(np.flatnonzero(is_cut).tolist())
    block_cuts = [[v for v in b if v in cutset] for b in blocks]
    tree_edges = sorted((c, i) for i, bc in enumerate(block_cuts) for c in bc)
    if not cutset:
        leaves = 1
    else:
        leaves = sum(1 for bc in block_cuts if len(bc) == 1)
    return BlockCutTree(blocks, sorted(cutset), tree_edges, leaves, block_cuts)


def is_biconnected(g: Graph) -> bool:
    """2-connected in the usual sense: connected, at least 3 vertices, no cut vertex."""
    if g.n < 3 or not is_connected(g):
        return False
    eid, m = edge_ids(g)
    _, is_cut, _ = kernels.biconnected(g.indptr, g.indices, eid, m)
    return not is_cut.any()


@dataclass(frozen=True)
class TwinPartition:
    class_of: np.ndarray
    classes: list


def twin_partition(g: Graph, seed=0x5EED) -> TwinPartition:
    """Closed-neighbourhood classes via random hashing, then exact confirmation."""
    n = g.n
    if n == 0:
        return TwinPartition(np.zeros(0, np.int64), [])
    rng = np.random.default_rng(seed)
    r = rng.integers(0, 2**63, size=n, dtype=np.int64).astype(np.uint64)
    h = r.copy()
    if g.indices.size:
        cs = np.zeros(g.indices.size + 1, dtype=np.uint64)
        np.cumsum(r[g.indices], out=cs[1:])
        h = h + (cs[g.indptr[1:]] - cs[g.indptr[:-1]])
    order = np.lexsort((np.arange(n), h, g.degree))
    classes = []
    adj = g.adj
    i = 0
    while i < n:
        j = i
        while j + 1 < n and h[order[j + 1]] == h[order[i]] and g.degree[order[j + 1]] == g.degree[order[i]]:
            j += 1
        group = order[i:j + 1].tolist()
        if len(group) == 1:
            classes.append(group)
        else:
            exact = {}
            for v in group:
                key = tuple(sorted(adj[v] + [v]))
                exact.setdefault(key, []).append(v)
            classes.extend(exact.values())
        i = j + 1
    classes = sorted(sorted(c) for c in classes)
    class_of = np.empty(n, dtype=np.int64)
    for k, c in enumerate(classes):
        class_of[c] = k
    return TwinPartition(class_of, classes)
