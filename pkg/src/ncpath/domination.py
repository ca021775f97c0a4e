"""Domination problems solved piece by piece on the path model.

Every vertex path lives inside one piece, and pieces only meet at terminal
nodes, whose cliques are the sole channel through which a choice in one piece
dominates vertices of another. That keeps all three problems local:

* connected domination and Steiner sets reduce to covering tree edges,
* minimum domination is a dynamic program over the tree of pieces, with one
  bit per terminal ("is some chosen vertex in this clique?").
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chordal import Hole, chordality, clique_tree
from .graph import Graph, require_connected
from .locality import localize
from .model import CrossReport, NcModel, Piece, annotate

INF = 1 << 60


class NotInClassError(ValueError):
    """Input is not an NC-path-tree graph; ``witness`` refutes membership."""

    def __init__(self, witness):
        super().__init__(f"graph is not an NC-path-tree graph ({witness.kind} on {witness.vertices})")
        self.witness = witness


@dataclass(frozen=True)
class DomResult:
    kind: str
    vertices: list
    complete_graph: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_json(self):
        d = {"kind": self.kind, "size": self.size, "vertices": self.vertices, "optimal": True}
        if self.complete_graph:
            d["complete_graph"] = True
        d.update(self.extra)
        return d


def run_localized(g: Graph, fn):
    """``(fn(h, relabeling), relabeling)`` on a renamed copy of a large graph, or ``(None, None)`` if small.

    Membership failures are re-raised with the witness in the caller's ids.
    """
    from .recognition import Witness

    require_connected(g)
    h, rl = localize(g)
    if rl is None:
        return None, None
    try:
        return fn(h, rl), rl
    except NotInClassError as exc:
        w = exc.witness
        center = None if w.center is None else rl.to_old([w.center])[0]
        raise NotInClassError(Witness(w.kind, rl.to_old(w.vertices), center)) from None


def _back(r: DomResult, rl) -> DomResult:
    return DomResult(r.kind, sorted(rl.to_old(r.vertices)), r.complete_graph, r.extra)


def build_model(g: Graph) -> NcModel:
    """Model of a connected NC-path-tree graph, or NotInClassError with a witness."""
    from .recognition import Witness, extract_claw

    require_connected(g)
    r = chordality(g)
    if isinstance(r, Hole):
        raise NotInClassError(Witness("Hole", r.cycle))
    t = clique_tree(g, r)
    m = annotate(t)
    if isinstance(m, CrossReport):
        raise NotInClassError(extract_claw(g, t, m))
    return m


def _edge_hit(m: NcModel, chosen: np.ndarray) -> np.ndarray:
    """Per tree edge (keyed by child node): does ``chosen`` meet its separator."""
    ptr, verts = m.separators
    k = m.tree.size
    owner = np.repeat(np.arange(k, dtype=np.int64), np.diff(ptr))
    hits = np.bincount(owner, weights=chosen[verts], minlength=k)
    return hits > 0


def covered_edge_check(g: Graph, m: NcModel, S) -> bool:
    """True when every clique-tree edge has a vertex of ``S`` in its separator."""
    chosen = np.zeros(g.n, dtype=np.bool_)
    chosen[np.asarray(list(S), dtype=np.int64)] = True
    hit = _edge_hit(m, chosen)
    child = m.tree.parent >= 0
    return bool(hit[child].all())


def _greedy_span(lo, hi, last):
    """Fewest intervals chaining position 0 to ``last`` (indices into the sorted arrays)."""
    out = []
    reach = 0
    i = 0
    n = lo.shape[0]
    while reach < last:
        best = -1
        while i < n and lo[i] <= reach:
            if best == -1 or hi[i] > hi[best]:
                best = i
            i += 1
        if best == -1 or hi[best] <= reach:
            raise AssertionError("auxiliary interval graph is disconnected")
        out.append(best)
        reach = hi[best]
    return out


def mcds(g: Graph, model: NcModel = None) -> DomResult:
    if model is None:
        r, rl = run_localized(g, lambda h, _: mcds(h, build_model(h)))
        if rl is not None:
            return _back(r, rl)
    m = model if model is not None else build_model(g)
    if m.tree.size == 1:
        return DomResult("MCDS", [0], complete_graph=True)
    chosen = []
    for p in m.pieces:
        if p.kind == "junction":
            reps = sorted(c[0] for c in p.classes)
            chosen.extend(reps[:2])
        elif p.k == 2:
            chosen.append(int(p.verts[0]))
        else:
            idx = _greedy_span(p.lo, p.hi, p.k - 1)
            chosen.extend(int(p.verts[i]) for i in idx)
    return DomResult("MCDS", sorted(set(chosen)))


def _piece_edges(m: NcModel, p: Piece):
    """Tree edge ids (child nodes) of a piece, in piece order."""
    par = m.tree.parent
    if p.kind == "junction":
        x = p.nodes[0]
        return [t if par[t] == x else x for t in p.nodes[1:]]
    z = p.nodes
    return [z[i] if par[z[i]] == z[i + 1] else z[i + 1] for i in range(len(z) - 1)]


def steiner_tree(g: Graph, X, model: NcModel = None) -> DomResult:
    """Fewest vertices inducing a connected subgraph that contains ``X``.

    The chosen vertices' paths must cover every edge of the smallest subtree
    spanning the paths of ``X``; edges already covered by ``X`` are free, the
    rest are covered optimally inside each piece.
    """
    X = sorted({int(v) for v in X})
    if not X:
        raise ValueError("terminal set X is empty")
    if any(not 0 <= v < g.n for v in X):
        raise ValueError("terminal outside the graph")
    if len(X) == 1:
        return DomResult("Steiner", X)
    if model is None:
        r, rl = run_localized(g, lambda h, rl: steiner_tree(h, rl.to_new(X), build_model(h)))
        if rl is not None:
            return _back(r, rl)
    m = model if model is not None else build_model(g)
    t = m.tree
    k = t.size
    if k == 1:
        return DomResult("Steiner", X)
    marked = np.zeros(k, dtype=np.int64)
    for v in X:
        marked[m.path_of(v)] = 1
    total = int(marked.sum())
    # subtree counts, children before parents
    order = _bfs_order(t.parent)
    below = marked.copy()
    for c in order[::-1]:
        p = t.parent[c]
        if p >= 0:
            below[p] += below[c]
    in_span = (below > 0) & (below < total) & (t.parent >= 0)
    inX = np.zeros(g.n, dtype=np.bool_)
    inX[X] = True
    need = in_span & ~_edge_hit(m, inX)
    extra = []
    for p in m.pieces:
        eids = _piece_edges(m, p)
        want = [i for i, e in enumerate(eids) if need[e]]
        if not want:
            continue
        if p.kind == "junction":
            # class j covers the star edges to terminals j and j+1 (mod 3)
            pairs = {0: (0, 1), 1: (1, 2), 2: (0, 2)}
            if len(want) == 3:
                extra.extend([p.classes[0][0], p.classes[1][0]])
            elif len(want) == 2:
                j = [c for c, pr in pairs.items() if set(pr) == set(want)][0]
                extra.append(p.classes[j][0])
            else:
                j = min(c for c, pr in pairs.items() if want[0] in pr)
                extra.append(p.classes[j][0])
        else:
            extra.extend(_cover_edges(p, want))
    return DomResult("Steiner", sorted(set(X) | set(int(v) for v in extra)))


def _cover_edges(p: Piece, want):
    """Fewest piece vertices whose spans cover the listed edge positions."""
    lo = p.lo
    hi = p.hi
    out = []
    covered_to = -1
    i = 0
    best = -1
    for e in want:
        if e < covered_to:
            continue
        # an interval covers edge e when lo <= e and hi >= e + 1
        while i < lo.shape[0] and lo[i] <= e:
            if best == -1 or hi[i] > hi[best]:
                best = i
            i += 1
        if best == -1 or hi[best] < e + 1:
            raise AssertionError("edge inside a piece with an empty separator")
        out.append(int(p.verts[best]))
        covered_to = int(hi[best])
    return out


def _bfs_order(parent):
    k = parent.shape[0]
    kids = [[] for _ in range(k)]
    root = -1
    for c, p in enumerate(parent.tolist()):
        if p < 0:
            root = c
        else:
            kids[p].append(c)
    order = [root]
    for x in order:
        order.extend(kids[x])
    return np.asarray(order, dtype=np.int64)


# ---------------------------------------------------------------------------
# minimum domination


def _interval_dom(lo, hi, last, o, need, a, beta):
    """Constrained minimum domination of a proper family of spans.

    ``lo``/``hi`` are sorted with both sequences non-decreasing. Spans touching
    position 0 count as dominated when ``o``, spans touching ``last`` when
    ``beta``. ``need`` forces a chosen span at position 0, ``a`` one at
    ``last``. Returns chosen indices.
    """
    n = len(lo)
    chosen = []
    R = -1
    Lb = INF
    if need:
        u = max(i for i in range(n) if lo[i] == 0)
        chosen.append(u)
        R = hi[u]
    if a:
        if chosen and hi[chosen[0]] == last:
            w = chosen[0]
        else:
            w = min(i for i in range(n) if hi[i] == last)
            chosen.append(w)
        Lb = lo[w]
    ptr = 0
    for v in range(n):
        if lo[v] <= R or hi[v] >= Lb:
            continue
        if (o and lo[v] == 0) or (beta and hi[v] == last):
            continue
        while ptr + 1 < n and lo[ptr + 1] <= hi[v]:
            ptr += 1
        chosen.append(ptr)
        if hi[ptr] > R:
            R = hi[ptr]
    return chosen


class _DomDP:
    def __init__(self, m: NcModel):
        self.m = m
        k = m.tree.size
        self.touch = [[] for _ in range(k)]
        for p in m.pieces:
            for x in (p.nodes[1:] if p.kind == "junction" else (p.nodes[0], p.nodes[-1])):
                self.touch[x].append(p.index)
        self.root = int(m.terminals[0])
        # orient the piece tree from the root terminal
        self.top = {}
        self.order = []
        seen = {self.root}
        stack = [self.root]
        while stack:
            t = stack.pop()
            self.order.append(("t", t))
            for pi in self.touch[t]:
                if pi in self.top:
                    continue
                self.top[pi] = t
                self.order.append(("p", pi))
                for b in self._bottoms(pi):
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
        self.children = {}
        for pi, t in self.top.items():
            self.children.setdefault(t, []).append(pi)
        for v in self.children.values():
            v.sort()
        self.c = {}
        self.crec = {}
        self.H = {}
        self.hrec = {}

    def _bottoms(self, pi):
        p = self.m.pieces[pi]
        t = self.top[pi]
        if p.kind == "junction":
            return [x for x in p.nodes[1:] if x != t]
        return [p.nodes[-1] if p.nodes[0] == t else p.nodes[0]]

    def cval(self, b, a, beta):
        c1, c10, c00 = self.c[b]
        if beta:
            return c1
        return c10 if a else c00

    def oriented(self, p: Piece):
        lo = p.lo.tolist()
        hi = p.hi.tolist()
        verts = p.verts.tolist()
        if p.nodes[0] != self.top[p.index]:
            last = p.k - 1
            lo, hi = [last - h for h in reversed(hi)], [last - l for l in reversed(lo)]
            verts = verts[::-1]
        return lo, hi, verts

    def terminal(self, t):
        kids = self.children.get(t, [])
        has_priv = self.m.privates(t).shape[0] > 0
        base1 = sum(self.H[q][(1, 0)] for q in kids)
        best, rec = INF, None
        if has_priv:
            best, rec = 1 + base1, ("private",)
        for q in kids:
            val = base1 - self.H[q][(1, 0)] + self.H[q][(1, 1)]
            if val < best:
                best, rec = val, ("child", q)
        c1 = min(best, INF)
        c10 = base1
        if has_priv:
            c00, rec00 = c1, ("hit",)
        else:
            base0 = sum(self.H[q][(0, 0)] for q in kids)
            c00, rec00 = (c1, ("hit",)) if c1 < base0 else (base0, ("nohit",))
        self.c[t] = (c1, c10, c00)
        self.crec[t] = (rec, rec00)

    def piece(self, pi):
        p = self.m.pieces[pi]
        table = {}
        rec = {}
        if p.kind == "junction":
            t = self.top[pi]
            b1, b2 = self._bottoms(pi)
            pairs = [(t, b1), (t, b2), (b1, b2)]
            cls_of = {}
            names = p.nodes[1:]
            for j, (u, w) in enumerate(((names[0], names[1]), (names[1], names[2]), (names[0], names[2]))):
                cls_of[frozenset((u, w))] = p.classes[j]
            classes = [cls_of[frozenset(pr)] for pr in pairs]
            for o in (0, 1):
                for need in (0, 1):
                    best, arg = INF, None
                    for mask in range(8):
                        C = [j for j in range(3) if mask >> j & 1]
                        ht = 0 in C or 1 in C
                        h1 = 0 in C or 2 in C
                        h2 = 1 in C or 2 in C
                        if need and not ht:
                            continue
                        for be1 in (0, 1):
                            for be2 in (0, 1):
                                if not C and not ((o or be1) and (o or be2) and (be1 or be2)):
                                    continue
                                cost = len(C) + self.cval(b1, h1, be1) + self.cval(b2, h2, be2)
                                if cost < best:
                                    best = cost
                                    arg = ([classes[j][0] for j in C], ((b1, h1, be1), (b2, h2, be2)))
                    table[(o, need)] = best
                    rec[(o, need)] = arg
        else:
            lo, hi, verts = self.oriented(p)
            last = p.k - 1
            b = self._bottoms(pi)[0]
            for o in (0, 1):
                for need in (0, 1):
                    best, arg = INF, None
                    for a in (1, 0):
                        for beta in (0, 1):
                            ch = _interval_dom(lo, hi, last, o, need, a, beta)
                            cost = len(ch) + self.cval(b, a, beta)
                            if cost < best:
                                best = cost
                                arg = ([verts[i] for i in ch], ((b, a, beta),))
                    table[(o, need)] = best
                    rec[(o, need)] = arg
        self.H[pi] = table
        self.hrec[pi] = rec

    def solve(self):
        for kind, x in reversed(self.order):
            if kind == "t":
                self.terminal(x)
            else:
                self.piece(x)
        chosen = []
        stack = [("t", self.root, 0, 0)]
        while stack:
            kind, x, s1, s2 = stack.pop()
            if kind == "t":
                a, beta = s1, s2
                kids = self.children.get(x, [])
                rec, rec00 = self.crec[x]
                if not beta and not a and rec00[0] == "hit":
                    beta = 1
                if beta:
                    if rec[0] == "private":
                        chosen.append(int(self.m.privates(x)[0]))
                    for q in kids:
                        hit_here = rec[0] == "child" and rec[1] == q
                        stack.append(("p", q, 1, 1 if hit_here else 0))
                else:
                    for q in kids:
                        stack.append(("p", q, a, 0))
            else:
                picks, bottoms = self.hrec[x][(s1, s2)]
                chosen.extend(int(v) for v in picks)
                for b, a, beta in bottoms:
                    stack.append(("t", b, int(a), int(beta)))
        return sorted(set(chosen)), self.c[self.root][2]


def _make_independent(g: Graph, D):
    """Swap chosen vertices for private neighbours until no two are adjacent.

    Each swap replaces a vertex that has a chosen neighbour by one of its
    private neighbours; in a claw-free graph those form a clique, so the set
    stays dominating, keeps its size, and loses at least one inner edge.
    """
    inD = np.zeros(g.n, dtype=np.bool_)
    inD[D] = True
    cnt = np.zeros(g.n, dtype=np.int64)
    adj = g.adj
    for d in D:
        cnt[d] += 1
        for w in adj[d]:
            cnt[w] += 1
    queue = sorted(D)
    while queue:
        x = queue.pop()
        if not inD[x] or cnt[x] < 2:
            continue
        priv = [p for p in adj[x] if cnt[p] == 1 and not inD[p]]
        if not priv:
            raise AssertionError("dominating set is not minimal")
        p = min(priv)
        inD[x] = False
        cnt[x] -= 1
        for w in adj[x]:
            cnt[w] -= 1
        inD[p] = True
        cnt[p] += 1
        for w in adj[p]:
            cnt[w] += 1
    return np.flatnonzero(inD).tolist()


def mids(g: Graph, model: NcModel = None, kind="MIDS") -> DomResult:
    """Minimum dominating set that is also independent."""
    if model is None:
        r, rl = run_localized(g, lambda h, _: mids(h, build_model(h), kind))
        if rl is not None:
            return _back(r, rl)
    m = model if model is not None else build_model(g)
    if m.tree.size == 1:
        return DomResult(kind, [0], complete_graph=True)
    D, cost = _DomDP(m).solve()
    assert len(D) == cost, "traceback disagrees with the table"
    return DomResult(kind, _make_independent(g, D))


def mds(g: Graph, model: NcModel = None) -> DomResult:
    return mids(g, model, kind="MDS")
