import numpy as np
from hypothesis import given, strategies as st

from conftest import CLAW, K3, P4, SUN3
from ncpath.chordal import chordality, clique_tree
from ncpath.graph import twin_partition
from ncpath.model import JUNCTION, MIXED, TERMINAL, CrossReport, annotate, build_aux_graph, partition_edges, to_dot
from ncpath.recognition import recognize
from ncpath.testkit.generators import GenSpec, exhaustive_small, gen
from ncpath.testkit.oracles import oracle_member


def model(g):
    return annotate(clique_tree(g, chordality(g)))


def test_p4_all_terminal():
    m = model(P4)
    assert (m.node_class == TERMINAL).all()
    assert m.roles(1) == ["leaf", "leaf"]
    assert [p.kind for p in partition_edges(m)] == ["path", "path"]
    assert sorted(len(p.nodes) for p in m.pieces) == [2, 2]


def test_sun_one_junction():
    m = model(SUN3)
    center = m.tree.cliques.index([0, 1, 2])
    assert m.node_class[center] == JUNCTION
    assert all(m.node_class[x] == TERMINAL for x in range(4) if x != center)
    (p,) = partition_edges(m)
    assert p.kind == "junction" and p.nodes[0] == center
    assert sorted(map(list, p.classes)) == [[0], [1], [2]]


def test_claw_reports():
    r = model(CLAW)
    assert isinstance(r, CrossReport)
    assert r.vertex == 0


def test_k3_no_pieces():
    m = model(K3)
    assert m.tree.size == 1 and partition_edges(m) == []


def test_p4_aux_graph():
    m = model(P4)
    a = build_aux_graph(m, m.pieces[0])
    assert a.size == 3 and a.graph.m == 2
    assert a.vertex_map.tolist() == [-1, 1, -1]


def _check_model(g, m):
    t = m.tree
    deg = np.array([len(r) for r in t.tree_adj])
    for x in range(t.size):
        c = m.node_class[x]
        if c == MIXED:
            assert deg[x] == 2
        if c == JUNCTION:
            assert deg[x] == 3 and all(m.node_class[y] == TERMINAL for y in t.tree_adj[x])
        if deg[x] >= 4:
            assert c == TERMINAL
    # every occ is a path in the tree, listed in order
    for v in range(g.n):
        p = m.path_of(v).tolist()
        assert sorted(p) == sorted(t.occ[v])
        assert all(b in t.tree_adj[a] for a, b in zip(p, p[1:]))
    # pieces split the tree edges exactly
    seen = []
    for p in m.pieces:
        if p.kind == "path":
            seen += [frozenset(e) for e in zip(p.nodes, p.nodes[1:])]
            assert m.node_class[p.nodes[0]] == TERMINAL and m.node_class[p.nodes[-1]] == TERMINAL
            assert all(m.node_class[x] == MIXED for x in p.nodes[1:-1])
        else:
            seen += [frozenset((p.nodes[0], y)) for y in p.nodes[1:]]
    assert sorted(map(sorted, seen)) == sorted(sorted(e) for e in t.tree_edges().tolist())
    # non-crossing: each difference of two paths is connected in the tree
    paths = [set(t.occ[v]) for v in range(g.n)]
    for u in range(g.n):
        for v in range(g.n):
            d = paths[u] - paths[v]
            if d:
                start = next(iter(d))
                seen_, stack = {start}, [start]
                while stack:
                    x = stack.pop()
                    for y in t.tree_adj[x]:
                        if y in d and y not in seen_:
                            seen_.add(y)
                            stack.append(y)
                assert seen_ == d


def _check_aux(m, p):
    a = build_aux_graph(m, p)
    cl = [set(m.tree.cliques[x]) for x in p.nodes]
    k = len(cl)
    inner = set().union(*cl[1:-1]) if k > 2 else cl[0] & cl[1]
    vm = a.vertex_map.tolist()
    assert vm[0] == vm[-1] == -1 and set(vm[1:-1]) == inner and len(vm) == len(inner) + 2
    ag = a.graph
    first = {vm[i] for i in ag.adj[0]}
    last = {vm[i] for i in ag.adj[a.size - 1]}
    assert first == cl[0] & cl[1] and last == cl[-2] & cl[-1]
    for i in range(1, k - 1):
        ids = [j for j in range(1, a.size - 1) if vm[j] in cl[i]]
        assert all(ag.has_edge(x, y) for x in ids for y in ids if x < y)
    assert ag.m <= a.size * a.size


def test_exhaustive_members():
    for n in range(1, 9):
        for g in exhaustive_small(n):
            if not oracle_member(g, "nc-path-tree"):
                continue
            m = model(g)
            assert not isinstance(m, CrossReport)
            _check_model(g, m)
            for p in m.path_pieces():
                _check_aux(m, p)


@given(st.integers(1, 40), st.integers(0, 2**32), st.sampled_from([0.0, 0.3, 0.7]))
def test_random_models(n, seed, jp):
    g = gen(GenSpec("random-host-tree-nc-paths", n, seed, {"junction_prob": jp, "twins": 1}))
    m = model(g)
    _check_model(g, m)
    for p in m.path_pieces():
        _check_aux(m, p)
    if len(twin_partition(g).classes) == g.n:
        for x in m.junctions.tolist():
            assert m.tree.clique(x).shape[0] == 3


def test_proper_interval_long_piece():
    for seed in range(40):
        g = gen(GenSpec("random-proper-interval", 30, seed))
        m = model(g)
        for p in m.path_pieces():
            if len(p.nodes) >= 5:
                _check_aux(m, p)
                a = build_aux_graph(m, p)
                assert recognize(a.graph, "proper-interval").member


def test_dot_export():
    m = model(SUN3)
    dot = to_dot(m)
    assert dot.startswith("graph") and dot.count("triangle") == 1 and dot.count("box") == 3
    assert m.to_json()["pieces"][0]["kind"] == "junction-star"
