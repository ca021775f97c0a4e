"""Regenerate the connected 8-vertex graphs shipped with the testkit.

Every graph on 8 vertices is a 7-vertex graph plus one vertex, so extending
each atlas graph on 7 vertices by every neighbour set and removing
isomorphic duplicates yields all of them. Expected count: 11117.

    python3 tools/gen_graph8.py src/ncpath/testkit/data/connected8.g6.gz
"""

import gzip
import sys
from collections import defaultdict

import networkx as nx
from networkx.generators.atlas import graph_atlas_g


def main(out):
    seen = defaultdict(list)
    kept = []
    for H in graph_atlas_g():
        if H.number_of_nodes() != 7:
            continue
        for mask in range(1, 1 << 7):
            G = H.copy()
            G.add_edges_from((7, v) for v in range(7) if mask >> v & 1)
            if not nx.is_connected(G):
                continue
            key = (G.number_of_edges(), tuple(sorted(d for _, d in G.degree())),
                   nx.weisfeiler_lehman_graph_hash(G, iterations=3))
            if any(nx.is_isomorphic(G, K) for K in seen[key]):
                continue
            seen[key].append(G)
            kept.append(G)
    kept.sort(key=lambda G: (G.number_of_edges(), sorted(d for _, d in G.degree())))
    blob = b"".join(nx.to_graph6_bytes(G, header=False) for G in kept)
    with open(out, "wb") as fh:
        fh.write(gzip.compress(blob, mtime=0))
    print(len(kept))


if __name__ == "__main__":
    main(sys.argv[1])
