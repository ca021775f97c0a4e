import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import C4, CLAW, G, K4, NET, P4, SUN3
from ncpath.graph import DisconnectedGraphError
from ncpath.recognition import (CLASSES, Certificate, ModelPayload, NotChordalError, Witness, check_witness,
                                find_claw_chordal, recognize, verify_certificate)
from ncpath.testkit.generators import GenSpec, exhaustive_small, gen
from ncpath.testkit.oracles import find_claw, oracle_member


def test_claw_is_refuted():
    c = recognize(CLAW, "nc-path-tree")
    assert not c.member
    w = c.payload
    assert w.kind == "Claw" and w.center == 0 and w.vertices[0] == 0 and sorted(w.vertices[1:]) == [1, 2, 3]


def test_sun_classes():
    c = recognize(SUN3, "nc-path-tree")
    assert c.member and len(c.model.junction_pieces()) == 1
    c = recognize(SUN3, "nc-path-rtree")
    assert not c.member and c.payload.kind == "ThreeSun"
    assert verify_certificate(SUN3, c)


def test_net_classes():
    assert recognize(NET, "nc-path-rtree").member
    c = recognize(NET, "proper-interval")
    assert not c.member and c.payload.kind == "Net" and verify_certificate(NET, c)


def test_hole_for_every_class():
    for cls in CLASSES:
        c = recognize(C4, cls)
        assert c.payload.kind == "Hole" and verify_certificate(C4, c)


def test_disconnected_rejected():
    with pytest.raises(DisconnectedGraphError):
        recognize(G(4, [(0, 1), (2, 3)]))
    with pytest.raises(ValueError):
        recognize(P4, "interval")


def test_crossing_pair_claw():
    # cliques {v,a} {v,u,c} {v,u,d} {v,b} on a path; P_u sits strictly inside P_v
    v, u, a, b, c, d = range(6)
    g = G(6, [(v, a), (v, u), (v, c), (u, c), (v, d), (u, d), (v, b)])
    w, m = find_claw_chordal(g)
    assert m is None and w.kind == "Claw" and w.center == v and check_witness(g, w)


def test_find_claw_chordal_examples():
    w, m = find_claw_chordal(CLAW)
    assert w.center == 0 and sorted(w.vertices[1:]) == [1, 2, 3]
    w, m = find_claw_chordal(SUN3)
    assert w is None and m.tree.size == 4
    with pytest.raises(NotChordalError) as ei:
        find_claw_chordal(C4)
    assert sorted(ei.value.hole) == [0, 1, 2, 3]


def test_verify_rejects_forgeries():
    c = recognize(SUN3, "nc-path-tree")
    forged = Certificate("nc-path-rtree", "member", ModelPayload(
        c.payload.size, c.payload.tree_edges, c.payload.occ_ptr, c.payload.nodes, 1, "rtree"))
    assert not verify_certificate(SUN3, forged)
    bad = Certificate("nc-path-tree", "non-member", Witness("Claw", [0, 1, 2, 3], 0))
    assert not verify_certificate(P4, bad)
    # a 3-sun does not refute the larger class
    sun = recognize(SUN3, "nc-path-rtree")
    assert not verify_certificate(SUN3, Certificate("nc-path-tree", "non-member", sun.payload))


def test_json_round_trip():
    for g, cls in [(SUN3, "nc-path-tree"), (NET, "proper-interval"), (P4, "proper-interval"), (K4, "chordal")]:
        c = recognize(g, cls)
        d = json.loads(json.dumps(c.to_json()))
        assert list(d)[:2] == ["class", "verdict"]
        assert verify_certificate(g, Certificate.from_json(d))


def test_exhaustive_agreement():
    for n in range(1, 8):
        for g in exhaustive_small(n):
            verdicts = []
            for cls in CLASSES:
                c = recognize(g, cls)
                assert c.member == oracle_member(g, cls)
                assert verify_certificate(g, c)
                verdicts.append(c.member)
            # proper-interval <= rtree <= tree <= chordal
            assert verdicts[3] <= verdicts[2] <= verdicts[1] <= verdicts[0]


@given(st.sampled_from(["random-host-tree-nc-paths", "random-proper-interval", "random-chordal"]),
       st.integers(1, 150), st.integers(0, 2**32))
def test_random_certificates_verify(kind, n, seed):
    g = gen(GenSpec(kind, n, seed))
    for cls in CLASSES:
        c = recognize(g, cls)
        assert verify_certificate(g, c), cls
    if kind != "random-chordal":
        assert recognize(g, "nc-path-tree").member
    if kind == "random-proper-interval":
        assert recognize(g, "proper-interval").member


@given(st.integers(5, 40), st.integers(0, 2**32))
def test_claw_detection_matches_search(n, seed):
    g = gen(GenSpec("random-chordal", n, seed))
    w, m = find_claw_chordal(g)
    assert (w is None) == (find_claw(g) is None)
    if w is not None:
        assert check_witness(g, w)


def test_large_graph_certificate_in_caller_ids():
    g = gen(GenSpec("random-host-tree-nc-paths", 6000, 3, {"biconnected": True}))
    c = recognize(g)
    assert c.member and c.model is None and verify_certificate(g, c)
    h = gen(GenSpec("random-chordal", 6000, 1))
    c = recognize(h)
    assert not c.member and verify_certificate(h, c)
