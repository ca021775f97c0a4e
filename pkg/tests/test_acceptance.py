"""The ten acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line, and the lines
are repeated in the terminal summary. Instance sets are seeded, so a failure
reproduces exactly.
"""

import csv
import itertools
import subprocess
import sys
from collections import Counter
import time
from functools import lru_cache

import networkx as nx
import numpy as np

from ncpath import cli
from ncpath.chordal import clique_tree, lexbfs_order
from ncpath.domination import build_model, covered_edge_check, mcds, mids, steiner_tree
from ncpath.graph import Graph, block_cut_tree, is_biconnected
from ncpath.hamiltonicity import SpanResult, hamiltonian_cycle, hamiltonian_path, min_leaf_spanning_tree, validate_span
from ncpath.recognition import CLASSES, Certificate, ModelPayload, Witness, find_claw_chordal, recognize, \
    verify_certificate
from ncpath.testkit.generators import GenSpec, exhaustive_small, gen
from ncpath.testkit.oracles import (_connected_mask, _masks, find_claw, find_hole, induces_connected, is_dominating,
                                    min_leaf_count, oracle_domination, oracle_hamiltonian, oracle_member)

RESULTS = []

NC_PARAMS = [{}, {"junction_prob": 0.6}, {"twins": 2, "junction_prob": 0.4}, {"max_piece_len": 3, "private_prob": 0.05},
             {"junction_prob": 0.8, "private_prob": 0.3}, {"biconnected": True},
             {"max_extra": 0, "junction_prob": 0.3}, {"max_extra": 1, "private_prob": 0.3},
             {"max_extra": 0, "max_piece_len": 2, "junction_prob": 0.0, "private_prob": 0.0}]


def report(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    RESULTS.append(line)
    assert ok, line


def nc_instances(count, max_n, seed0=0, min_n=1):
    out = []
    for s in range(count):
        # size and parameter set vary independently
        n = min_n + (s // len(NC_PARAMS)) % (max_n - min_n + 1)
        p = dict(NC_PARAMS[s % len(NC_PARAMS)])
        if p.get("biconnected") and n < 3:
            p = {}
        out.append(gen(GenSpec("random-host-tree-nc-paths", n, seed0 + s, p)))
    return out


@lru_cache(maxsize=None)
def exhaustive_run():
    """(graph, class, certificate, oracle verdict) over all connected graphs on at most 8 vertices."""
    rows = []
    for n in range(1, 9):
        for g in exhaustive_small(n):
            for cls in CLASSES:
                rows.append((g, cls, recognize(g, cls), oracle_member(g, cls)))
    return rows


def test_criterion_1_fisc_equivalence():
    t0 = time.perf_counter()
    exhaustive_run.cache_clear()
    rows = exhaustive_run()
    wall = time.perf_counter() - t0
    bad = sum(c.member != want for _, _, c, want in rows)
    graphs = len(rows) // len(CLASSES)
    report(1, bad == 0 and wall < 180,
           f"{graphs} connected graphs n<=8 x 4 classes, {bad} mismatches, {wall:.1f}s (limit 180s)")


def _shape_lie(c: Certificate):
    p = c.payload
    return Certificate("proper-interval", "member", ModelPayload(p.size, p.tree_edges, p.occ_ptr, p.nodes, -1, "path"))


def _with_paths(c: Certificate, paths):
    p = c.payload
    occ_ptr = np.zeros(len(paths) + 1, dtype=np.int64)
    np.cumsum([len(x) for x in paths], out=occ_ptr[1:])
    flat = np.array([x for q in paths for x in q], dtype=np.int64)
    return Certificate(c.target_class, c.verdict, ModelPayload(p.size, p.tree_edges, occ_ptr, flat, p.root, p.host))


def _induces(g: Graph, vs, kind):
    """Independent check that ``vs`` induces the named graph (networkx isomorphism)."""
    if len(set(vs)) != len(vs) or any(not 0 <= v < g.n for v in vs):
        return False
    H = nx.Graph()
    H.add_nodes_from(vs)
    H.add_edges_from((a, b) for a, b in itertools.combinations(vs, 2) if g.has_edge(a, b))
    if kind == "Hole":
        return len(vs) >= 4 and nx.is_isomorphic(H, nx.cycle_graph(len(vs)))
    ref = {"Claw": nx.star_graph(3),
           "Net": nx.Graph([(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)]),
           "ThreeSun": nx.Graph([(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5)])}[kind]
    return nx.is_isomorphic(H, ref)


def mutate(g: Graph, c: Certificate, rng, choice=0):
    """``(label, certificate)`` wrong by construction, or None if ``c`` offers no such change."""
    if isinstance(c.payload, Witness):
        w = c.payload
        for _ in range(20):
            vs = list(w.vertices)
            vs[rng.integers(len(vs))] = int(rng.integers(g.n))
            if not _induces(g, vs, w.kind):
                w = Witness(w.kind, vs, vs[0] if w.kind == "Claw" else None)
                return "witness-vertex", Certificate(c.target_class, c.verdict, w)
        return None
    p = c.payload
    paths = [p.node_list(v) for v in range(g.n)]
    adj = [set(g.adj[v]) for v in range(g.n)]
    if choice == 0:
        # swap the paths of two vertices whose neighbourhoods differ
        pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if adj[u] - {v} != adj[v] - {u}]
        if pairs:
            u, v = pairs[rng.integers(len(pairs))]
            paths[u], paths[v] = paths[v], paths[u]
            return "swap-paths", _with_paths(c, paths)
    if choice == 1:
        # drop an end node that is the only meeting point with some neighbour
        for v in rng.permutation(g.n).tolist():
            if len(paths[v]) < 2:
                continue
            end = paths[v][-1]
            rest = set(paths[v][:-1])
            if any(end in paths[u] and not rest & set(paths[u]) for u in adj[v]):
                paths[v] = paths[v][:-1]
                return "cut-path", _with_paths(c, paths)
    if choice == 2 and c.target_class != "chordal":
        deg = np.bincount(np.asarray(p.tree_edges).ravel(), minlength=p.size) if p.size > 1 else np.zeros(1)
        if deg.max() >= 3:
            return "host-shape", _shape_lie(c)
        # claim a non-member: verdict flipped with the model still attached
        return "verdict-flip", Certificate(c.target_class, "non-member", p)
    return None


def test_criterion_2_certificate_soundness():
    exhaustive = exhaustive_run()
    bad_ex = sum(not verify_certificate(g, c) for g, _, c, _ in exhaustive)
    kinds = ["random-host-tree-nc-paths", "random-proper-interval", "random-chordal"]
    bad_rand = 0
    random_certs = []
    for s in range(10_000):
        kind = kinds[s % 3]
        g = gen(GenSpec(kind, 1 + (s * 7) % 200, 10_000 + s))
        cls = CLASSES[(s // 3) % 4]
        c = recognize(g, cls)
        if not verify_certificate(g, c):
            bad_rand += 1
        if g.n <= 40:
            random_certs.append((g, c))
    rng = np.random.default_rng(2)
    pool = [(g, c) for g, _, c, _ in exhaustive if g.n >= 4] + random_certs
    members = [x for x in pool if x[1].member]
    refuted = [x for x in pool if not x[1].member]
    mutated = []
    tries = 0
    while len(mutated) < 100:
        tries += 1
        src = members if tries % 2 else refuted
        g, c = src[rng.integers(len(src))]
        m = mutate(g, c, rng, choice=(tries // 2) % 3)
        if m is not None:
            mutated.append((g, *m))
    accepted = sum(bool(verify_certificate(g, m)) for g, _, m in mutated)
    mix = Counter(label for _, label, _ in mutated)
    ok = bad_ex == 0 and bad_rand == 0 and accepted == 0
    report(2, ok, f"{len(exhaustive)} exhaustive + 10000 random certificates, {bad_ex + bad_rand} rejected; "
                  f"{accepted}/100 mutated certificates accepted ({dict(sorted(mix.items()))})")


def test_criterion_3_claw_detection():
    bad = 0
    exhaustive = 0
    for n in range(1, 9):
        for g in exhaustive_small(n):
            if find_hole(g) is not None:
                continue
            exhaustive += 1
            w, _ = find_claw_chordal(g)
            bad += (w is None) != (find_claw(g) is None) or (w is not None and not _induces(g, w.vertices, "Claw"))
    free = 0
    for s in range(1000):
        g = gen(GenSpec("random-chordal", 1 + s % 60, 20_000 + s))
        w, _ = find_claw_chordal(g)
        truth = find_claw(g) is None
        free += truth
        bad += (w is None) != truth or (w is not None and not _induces(g, w.vertices, "Claw"))
    report(3, bad == 0, f"{exhaustive} chordal graphs n<=8 + 1000 random chordal n<=60 "
                        f"({free} claw-free), {bad} mismatches")


@lru_cache(maxsize=None)
def domination_set():
    return nc_instances(1200, 14, seed0=30_000)


def _all_subsets_check(g, m):
    nb = _masks(g)
    closed = [nb[v] | 1 << v for v in range(g.n)]
    full = (1 << g.n) - 1
    bad = 0
    for S in range(1 << g.n):
        members = [v for v in range(g.n) if S >> v & 1]
        dom = 0
        for v in members:
            dom |= closed[v]
        truth = S != 0 and dom == full and _connected_mask(nb, S)
        bad += covered_edge_check(g, m, members) != truth
    return bad


def test_criterion_4_mcds_optimality():
    gaps = 0
    junction_rich = 0
    for g in domination_set():
        m = build_model(g)
        junction_rich += len(m.junction_pieces()) >= 1
        r = mcds(g, m)
        ok = is_dominating(g, r.vertices) and induces_connected(g, r.vertices)
        gaps += not ok or r.size != oracle_domination(g, "MCDS")[0]
    star_graphs = 0
    star_bad = 0
    pool = [g for n in range(2, 9) for g in exhaustive_small(n) if oracle_member(g, "nc-path-tree")]
    pool += nc_instances(150, 10, seed0=40_000, min_n=9)
    for g in pool:
        m = build_model(g)
        if m.tree.size == 1:
            continue
        star_graphs += 1
        star_bad += _all_subsets_check(g, m)
    report(4, gaps == 0 and star_bad == 0,
           f"{len(domination_set())} instances n<=14 ({junction_rich} with junctions), {gaps} gaps; "
           f"covered-edge equivalence over all subsets of {star_graphs} graphs n<=10, {star_bad} mismatches")


def test_criterion_5_mds_equals_mids():
    gaps = 0
    for g in domination_set():
        r = mids(g)
        S = set(r.vertices)
        indep = not any(g.has_edge(u, v) for u in S for v in S if u < v)
        gaps += not (indep and is_dominating(g, S)) or r.size != oracle_domination(g, "MDS")[0]
    report(5, gaps == 0, f"{len(domination_set())} instances n<=14, {gaps} gaps against minimum domination")


def test_criterion_6_steiner_optimality():
    rng = np.random.default_rng(6)
    gaps = 0
    graphs = nc_instances(600, 12, seed0=50_000)
    for g in graphs:
        X = sorted(set(rng.integers(0, g.n, size=rng.integers(1, 5)).tolist()))
        r = steiner_tree(g, X)
        ok = set(X) <= set(r.vertices) and induces_connected(g, r.vertices)
        gaps += not ok or r.size != oracle_domination(g, "Steiner", X)[0]
    report(6, gaps == 0, f"{len(graphs)} instances n<=12, |X|<=4, {gaps} gaps")


def test_criterion_7_hamiltonicity():
    bad = 0
    hc_yes = hp_yes = 0
    graphs = nc_instances(1200, 12, seed0=60_000, min_n=3)
    for g in graphs:
        m = build_model(g)
        hc = hamiltonian_cycle(g, m)
        has_hc = isinstance(hc, SpanResult)
        bad += has_hc != (is_biconnected(g) and g.n >= 3) or has_hc != oracle_hamiltonian(g, "HC")
        bad += has_hc and not validate_span(g, hc)
        hp = hamiltonian_path(g, m)
        has_hp = isinstance(hp, SpanResult)
        bc_path = g.n <= 2 or block_cut_tree(g).is_path
        bad += has_hp != bc_path or has_hp != oracle_hamiltonian(g, "HP")
        bad += has_hp and not validate_span(g, hp)
        hc_yes += has_hc
        hp_yes += has_hp
    report(7, bad == 0, f"{len(graphs)} instances 3<=n<=12 ({hc_yes} with HC, {hp_yes} with HP), {bad} mismatches")


def test_criterion_8_min_leaf():
    bad = 0
    count = 0
    s = 70_000
    while count < 600:
        n = 3 + (s // len(NC_PARAMS)) % 9
        g = gen(GenSpec("random-host-tree-nc-paths", n, s, NC_PARAMS[s % len(NC_PARAMS)]))
        s += 1
        bct = block_cut_tree(g)
        if not bct.cut_vertices:
            continue
        count += 1
        r = min_leaf_spanning_tree(g)
        bad += not validate_span(g, r) or r.leaf_count != bct.leaf_count or min_leaf_count(g) != r.leaf_count
    report(8, bad == 0, f"{count} instances n<=11 with a cut vertex, {bad} mismatches")


def _random_peo(g: Graph, rng):
    """Elimination order picking a random simplicial vertex each step."""
    alive = set(range(g.n))
    nbr = [set(g.adj[v]) for v in range(g.n)]
    order = []
    while alive:
        simp = [v for v in sorted(alive)
                if all(g.has_edge(a, b) for a, b in itertools.combinations(sorted(nbr[v] & alive), 2))]
        v = simp[rng.integers(len(simp))]
        order.append(v)
        alive.remove(v)
    return order


def test_criterion_9_clique_tree_uniqueness():
    rng = np.random.default_rng(9)
    bad = 0
    distinct_orders = 0
    graphs = nc_instances(1000, 60, seed0=80_000)
    for g in graphs:
        orders = [lexbfs_order(g, seed=1)[::-1].tolist()] + [_random_peo(g, rng) for _ in range(4)]
        distinct_orders += len({tuple(o) for o in orders})
        forms = {clique_tree(g, o).canonical() for o in orders}
        bad += len(forms) != 1
    report(9, bad == 0, f"{len(graphs)} claw-free chordal instances n<=60, 5 PEOs each "
                        f"({distinct_orders / len(graphs):.2f} distinct on average), {bad} non-identical")


def test_criterion_10_linearity(tmp_path):
    # fresh process: the heap left behind by criteria 1-9 slows the large runs
    out = tmp_path / "bench.csv"
    subprocess.run([sys.executable, "-m", "ncpath", "bench", "--min-exp", "14", "--max-exp", "20",
                    "--repeat", "3", "--out", str(out)], check=True, capture_output=True)
    with open(out) as fh:
        rows = [(int(r["n"]), int(r["m"]), r["op"], float(r["wall"])) for r in csv.DictReader(fh)]
    parts = []
    ok = True
    for op in cli.BENCH_OPS:
        slope = cli.loglog_slope(rows, op)
        n, m, _, t = [r for r in rows if r[2] == op][-1]
        parts.append(f"{op} slope {slope:.3f} ({m / t:.0f} edges/s at n={n})")
        ok &= slope <= 1.15
    report(10, ok, "; ".join(parts) + " [limit 1.15; throughput reported only]")
