import os

import pytest
from hypothesis import HealthCheck, settings

from ncpath.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def G(n, edges):
    return Graph.from_edges(n, edges)


# small named graphs used across the suite
CLAW = G(4, [(0, 1), (0, 2), (0, 3)])
NET = G(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)])
# inner 0,1,2; outer 3~{0,1}, 4~{1,2}, 5~{0,2}
SUN3 = G(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5)])
P4 = G(4, [(0, 1), (1, 2), (2, 3)])
P5 = G(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
K3 = G(3, [(0, 1), (1, 2), (0, 2)])
K4 = G(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
C4 = G(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
BOWTIE = G(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
# three triangles sharing vertex 0
TRI_STAR = G(7, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (0, 5), (0, 6), (5, 6)])


@pytest.fixture
def named():
    return {"claw": CLAW, "net": NET, "sun3": SUN3, "P4": P4, "P5": P5, "K3": K3, "K4": K4,
            "C4": C4, "bowtie": BOWTIE, "tri_star": TRI_STAR}


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
