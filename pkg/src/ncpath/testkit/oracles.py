"""Brute-force oracles.

Nothing here touches clique trees or models; each answer comes from
exhaustive search over vertex subsets, orderings or an integer program.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..graph import Graph
from ..recognition import Witness

MAX_DOM = 16
MAX_HAM = 12
MAX_LEAF = 11


class OracleBoundError(ValueError):
    pass


def _masks(g: Graph):
    nb = [0] * g.n
    for u, v in g.edges().tolist():
        nb[u] |= 1 << v
        nb[v] |= 1 << u
    return nb


def _bits(x):
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def find_hole(g: Graph):
    """An induced cycle of length >= 4, or None.

    For every vertex v and non-adjacent pair a, b of its neighbours, a shortest
    a-b path avoiding the rest of N[v] closes a chordless cycle.
    """
    nb = _masks(g)
    for v in range(g.n):
        ns = _bits(nb[v])
        for a, b in combinations(ns, 2):
            if nb[a] >> b & 1:
                continue
            banned = (nb[v] | 1 << v) & ~(1 << a | 1 << b)
            prev = {a: None}
            frontier = [a]
            while frontier and b not in prev:
                nxt = []
                for x in frontier:
                    for y in _bits(nb[x] & ~banned):
                        if y not in prev:
                            prev[y] = x
                            nxt.append(y)
                frontier = nxt
            if b in prev:
                path = [b]
                while path[-1] != a:
                    path.append(prev[path[-1]])
                return [v] + path[::-1]
    return None


def find_claw(g: Graph):
    nb = _masks(g)
    for c in range(g.n):
        ns = _bits(nb[c])
        for a, b in combinations(ns, 2):
            if nb[a] >> b & 1:
                continue
            rest = nb[c] & ~nb[a] & ~nb[b] & ~(1 << a | 1 << b)
            rest &= ~((1 << (b + 1)) - 1)
            if rest:
                d = _bits(rest)[0]
                return [c, a, b, d]
    return None


def _six(g: Graph, deg_hi, deg_lo):
    """Six vertices inducing a triangle of degree ``deg_hi`` plus three independent vertices of degree ``deg_lo``."""
    nb = _masks(g)
    for s in combinations(range(g.n), 6):
        mask = sum(1 << v for v in s)
        deg = {v: bin(nb[v] & mask).count("1") for v in s}
        hi = [v for v in s if deg[v] == deg_hi]
        lo = [v for v in s if deg[v] == deg_lo]
        if len(hi) != 3 or len(lo) != 3:
            continue
        if all(nb[a] >> b & 1 for a, b in combinations(hi, 2)) and \
                not any(nb[a] >> b & 1 for a, b in combinations(lo, 2)):
            return hi, lo
    return None


def find_net(g: Graph):
    r = _six(g, 3, 1)
    if r is None:
        return None
    hi, lo = r
    nb = _masks(g)
    # pendants listed in the order of the triangle vertex they hang from
    pend = [next(u for u in lo if nb[t] >> u & 1) for t in hi]
    return hi + pend


def find_three_sun(g: Graph):
    r = _six(g, 4, 2)
    if r is None:
        return None
    hi, lo = r
    nb = _masks(g)
    # outer i misses inner i
    outer = [next(u for u in lo if not nb[t] >> u & 1) for t in hi]
    return hi + outer


def oracle_forbidden(g: Graph, kind):
    """Exhaustive search for one induced forbidden subgraph of the given kind."""
    if kind == "Hole":
        c = find_hole(g)
        return None if c is None else Witness("Hole", c)
    if kind == "Claw":
        c = find_claw(g)
        return None if c is None else Witness("Claw", c, center=c[0])
    if kind == "Net":
        c = find_net(g)
        return None if c is None else Witness("Net", c)
    if kind == "ThreeSun":
        c = find_three_sun(g)
        return None if c is None else Witness("ThreeSun", c)
    raise ValueError(f"unknown kind {kind!r}")


CLASS_FORBIDS = {
    "chordal": ("Hole",),
    "nc-path-tree": ("Hole", "Claw"),
    "nc-path-rtree": ("Hole", "Claw", "ThreeSun"),
    "proper-interval": ("Hole", "Claw", "ThreeSun", "Net"),
}


def oracle_member(g: Graph, cls) -> bool:
    return all(oracle_forbidden(g, k) is None for k in CLASS_FORBIDS[cls])


def _connected_mask(nb, mask):
    if not mask:
        return False
    low = mask & -mask
    seen = low
    frontier = low
    while frontier:
        grow = 0
        for v in _bits(frontier):
            grow |= nb[v]
        grow &= mask & ~seen
        seen |= grow
        frontier = grow
    return seen == mask


def oracle_domination(g: Graph, kind, X=None):
    """Exact minimum (size, witness) by subset enumeration in increasing size.

    ``kind`` is one of MDS, MIDS, MCDS or Steiner (which needs ``X``).
    """
    if g.n > MAX_DOM:
        raise OracleBoundError(f"n = {g.n} exceeds the oracle bound {MAX_DOM}")
    nb = _masks(g)
    closed = [nb[v] | 1 << v for v in range(g.n)]
    full = (1 << g.n) - 1
    need = 0
    if kind == "Steiner":
        if not X:
            raise ValueError("Steiner needs a nonempty terminal set")
        need = sum(1 << v for v in X)
    for size in range(1, g.n + 1):
        for s in combinations(range(g.n), size):
            mask = sum(1 << v for v in s)
            if kind == "Steiner":
                if mask & need == need and _connected_mask(nb, mask):
                    return size, list(s)
                continue
            dom = 0
            for v in s:
                dom |= closed[v]
            if dom != full:
                continue
            if kind == "MDS":
                return size, list(s)
            if kind == "MIDS" and not any(nb[v] & mask for v in s):
                return size, list(s)
            if kind == "MCDS" and _connected_mask(nb, mask):
                return size, list(s)
    raise ValueError("no feasible set (is the graph connected?)")


def is_dominating(g: Graph, S) -> bool:
    nb = _masks(g)
    dom = 0
    for v in S:
        dom |= nb[v] | 1 << v
    return dom == (1 << g.n) - 1


def induces_connected(g: Graph, S) -> bool:
    return _connected_mask(_masks(g), sum(1 << v for v in set(S)))


def _ham_table(g: Graph, start=None):
    """``dp[mask]`` = bitset of possible last vertices of a path covering exactly ``mask``."""
    n = g.n
    nb = _masks(g)
    dp = np.zeros(1 << n, dtype=np.int64)
    if start is None:
        for v in range(n):
            dp[1 << v] = 1 << v
    else:
        dp[1 << start] = 1 << start
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.array([bin(x).count("1") for x in range(1 << n)])
    for p in range(1, n):
        layer = masks[pop == p]
        for v in range(n):
            sel = layer[(dp[layer] >> v & 1).astype(bool)]
            if sel.size == 0:
                continue
            for w in _bits(nb[v]):
                tgt = sel[(sel >> w & 1) == 0] | (1 << w)
                dp[tgt] |= 1 << w
    return dp


def oracle_hamiltonian(g: Graph, kind):
    """HC -> bool, HP -> bool, min-leaf -> minimum number of leaves of a spanning tree."""
    if kind in ("HC", "HP"):
        if g.n > MAX_HAM:
            raise OracleBoundError(f"n = {g.n} exceeds the oracle bound {MAX_HAM}")
        if g.n == 1:
            return kind == "HP"
        full = (1 << g.n) - 1
        if kind == "HP":
            return bool(_ham_table(g)[full])
        if g.n < 3:
            return False
        ends = int(_ham_table(g, start=0)[full])
        return bool(ends & _masks(g)[0])
    if kind == "min-leaf":
        return min_leaf_count(g)
    raise ValueError(f"unknown kind {kind!r}")


def min_leaf_count(g: Graph) -> int:
    """Fewest leaves over all spanning trees, via a small flow-based integer program."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    n = g.n
    if n > MAX_LEAF:
        raise OracleBoundError(f"n = {n} exceeds the oracle bound {MAX_LEAF}")
    if n == 1:
        return 0
    if n == 2:
        return 2
    e = g.edges()
    m = e.shape[0]
    # variables: x_e (m), leaf y_v (n), flow f on both arc directions (2m)
    nv = m + n + 2 * m
    c = np.zeros(nv)
    c[m:m + n] = 1
    rows = []
    lb = []
    ub = []

    def row():
        return np.zeros(nv)

    r = row()
    r[:m] = 1
    rows.append(r); lb.append(n - 1); ub.append(n - 1)
    for v in range(n):
        # degree + 2 y_v >= 2 forces degree >= 2 unless v is a leaf
        r = row()
        r[:m] = (e[:, 0] == v) | (e[:, 1] == v)
        r[m + v] = 2
        rows.append(r); lb.append(2); ub.append(np.inf)
    # root 0 ships one unit to every other vertex along chosen edges
    fa = m + n
    fb = m + n + m
    for v in range(n):
        r = row()
        r[fa:fa + m] = (e[:, 1] == v).astype(float) - (e[:, 0] == v)
        r[fb:fb + m] = (e[:, 0] == v).astype(float) - (e[:, 1] == v)
        want = -(n - 1) if v == 0 else 1
        rows.append(r); lb.append(want); ub.append(want)
    for i in range(m):
        for off in (fa, fb):
            r = row()
            r[off + i] = 1
            r[i] = -(n - 1)
            rows.append(r); lb.append(-np.inf); ub.append(0)
    integrality = np.r_[np.ones(m + n), np.zeros(2 * m)]
    hi = np.r_[np.ones(m + n), np.full(2 * m, n - 1)]
    res = milp(c, constraints=LinearConstraint(np.array(rows), lb, ub), integrality=integrality,
               bounds=Bounds(np.zeros(nv), hi))
    if not res.success:
        raise ValueError("integer program failed: " + res.message)
    return int(round(res.fun))
