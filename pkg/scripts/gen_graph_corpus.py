"""Write every graph on at most 8 vertices, one per isomorphism class, as graph6 lines.

Graphs on up to 7 vertices come from the networkx atlas.  The 8-vertex
classes are obtained by attaching a new vertex to each 7-vertex class in
every possible way and keeping one graph per class (WL-hash buckets, then
exact isomorphism tests inside a bucket).

    python3 scripts/gen_graph_corpus.py [out.g6]
"""

import sys
import time
from itertools import combinations
from pathlib import Path

import networkx as nx

EXPECTED = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346}


def eight_vertex_classes(sevens):
    buckets: dict[str, list] = {}
    for G in sevens:
        for r in range(8):
            for nbrs in combinations(range(7), r):
                H = G.copy()
                H.add_node(7)
                H.add_edges_from((7, v) for v in nbrs)
                key = nx.weisfeiler_lehman_graph_hash(H, iterations=3)
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(H, other) for other in bucket):
                    bucket.append(H)
    return [H for key in sorted(buckets) for H in buckets[key]]


def main(out: Path) -> None:
    start = time.time()
    atlas = [G for G in nx.graph_atlas_g() if G.number_of_nodes() >= 1]
    sevens = [G for G in atlas if G.number_of_nodes() == 7]
    eights = eight_vertex_classes(sevens)
    graphs = atlas + sorted(eights, key=lambda H: (H.number_of_edges(), nx.to_graph6_bytes(H, header=False)))
    counts = {}
    for G in graphs:
        counts[G.number_of_nodes()] = counts.get(G.number_of_nodes(), 0) + 1
    if counts != EXPECTED:
        raise SystemExit(f"unexpected class counts {counts}")
    with open(out, "wb") as fh:
        for G in graphs:
            fh.write(nx.to_graph6_bytes(G, header=False))
    print(f"wrote {len(graphs)} graphs to {out} in {time.time() - start:.1f} s")


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "rainbowtight" / "data" / "graphs8.g6"
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else default)
