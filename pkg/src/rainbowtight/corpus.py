"""The shipped corpus of all graphs on at most 8 vertices (one per isomorphism class)."""

from __future__ import annotations

from importlib import resources
from typing import Iterator

import networkx as nx

from .core import KGraph


def small_graphs(max_vertices: int = 8) -> Iterator[KGraph]:
    """Yield each class as a 2-graph on points 0..n-1, smaller graphs first."""
    data = resources.files("rainbowtight").joinpath("data/graphs8.g6").read_bytes()
    for line in data.splitlines():
        G = nx.from_graph6_bytes(line)
        n = G.number_of_nodes()
        if n > max_vertices:
            continue
        yield KGraph(n, 2, frozenset(tuple(sorted(e)) for e in G.edges()))
