"""Tight components, strong connectivity, switchers, arcs and walk builders.

The walk builders turn the existence arguments for vicinity-generated
graphs into explicit walks.  Inside one color every window carries the
same color, so builders work on point sequences and wrap them at the end.
Two single-color walks are joined by plain juxtaposition of their point
lists; this is valid whenever every window across the junction is, as a
set, an edge of the color.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, gcd
from typing import TYPE_CHECKING, Sequence

import networkx as nx

from .core import KGraph, OneKGraph
from .sequential import SeqWalk, shorten_walk, single_color_walk

if TYPE_CHECKING:
    from .vicinity import Vicinity


class PreconditionError(ValueError):
    """An operation was called on an input violating its hypothesis."""

    def __init__(self, message: str, condition: str = ""):
        super().__init__(message)
        self.condition = condition


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return
        if self.rank[ri] < self.rank[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        if self.rank[ri] == self.rank[rj]:
            self.rank[ri] += 1


@dataclass(frozen=True)
class TightComponentDecomposition:
    host: KGraph
    components: tuple  # tuples of sorted edges, ordered by their smallest edge
    sizes: tuple

    def component_of(self, edge) -> int:
        e = tuple(sorted(edge))
        for idx, comp in enumerate(self.components):
            if e in comp:
                return idx
        raise KeyError(edge)

    def largest(self) -> tuple:
        """Component with most edges; ties go to the smaller minimum edge."""
        if not self.components:
            return ()
        return max(self.components, key=lambda comp: (len(comp), [-v for v in comp[0]]))

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1


def _edge_index(G: KGraph) -> dict[tuple, list[tuple]]:
    index: dict[tuple, list[tuple]] = {}
    for e in G.sorted_edges:
        for sub in combinations(e, G.k - 1):
            index.setdefault(sub, []).append(e)
    return index


def tight_components(G: KGraph) -> TightComponentDecomposition:
    """Partition edges: two edges are joined when they share k-1 points."""
    edges = G.sorted_edges
    pos = {e: i for i, e in enumerate(edges)}
    uf = UnionFind(len(edges))
    for group in _edge_index(G).values():
        first = pos[group[0]]
        for e in group[1:]:
            uf.union(first, pos[e])
    comps: dict[int, list] = {}
    for e in edges:
        comps.setdefault(uf.find(pos[e]), []).append(e)
    ordered = sorted((tuple(c) for c in comps.values()), key=lambda c: c[0])
    return TightComponentDecomposition(G, tuple(ordered), tuple(len(c) for c in ordered))


def is_tightly_connected(G: KGraph) -> bool:
    return tight_components(G).connected


def _only_color(H: OneKGraph, color: int | None) -> int:
    if color is not None:
        return color
    used = H.colors_used()
    if len(used) != 1:
        raise ValueError(f"expected a single-color graph, found colors {used}")
    return used[0]


def is_seq_tightly_connected(H: OneKGraph, color: int | None = None) -> bool:
    """Single-color sequential connectivity, via tight connectivity of the color's link."""
    return is_tightly_connected(H.color_graph(_only_color(H, color)))


def _move(points: list, cur: tuple, target: tuple) -> tuple:
    """Extend ``points`` (ending in ordering ``cur`` of edge e) into edge ``target``.

    Rotates along e until the point leaving is in front, then appends the
    point entering.  Every appended window is a rotation of e or equals
    ``target`` as a set.
    """
    leaving = next(v for v in cur if v not in target)
    entering = next(v for v in target if v not in cur)
    r = cur.index(leaving)
    points.extend(cur[:r])
    points.append(entering)
    return tuple(points[-len(cur):])


def tight_walk_between(G: KGraph, e, f) -> list[int] | None:
    """Point sequence whose first window is an ordering of e and last is an ordering of f."""
    e, f = tuple(sorted(e)), tuple(sorted(f))
    index = _edge_index(G)
    parent = {e: None}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        if x == f:
            break
        for sub in combinations(x, G.k - 1):
            for y in index.get(sub, ()):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
    if f not in parent:
        return None
    chain = [f]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    chain.reverse()
    points = list(chain[0])
    cur = chain[0]
    for nxt in chain[1:]:
        cur = _move(points, cur, nxt)
    return points


def tight_cover_walk(H: OneKGraph, color: int) -> SeqWalk:
    """A single-color walk through every edge of the color's first tight component.

    Built as a depth-first tour of a spanning tree of the edge adjacency.
    """
    G = H.color_graph(color)
    if not G.edges:
        return SeqWalk()
    index = _edge_index(G)
    root = G.sorted_edges[0]
    points = list(root)
    cur = root
    seen = {root}
    stack = [(root, iter(sorted({y for sub in combinations(root, G.k - 1) for y in index[sub]})))]
    while stack:
        node, children = stack[-1]
        child = next((y for y in children if y not in seen), None)
        if child is None:
            stack.pop()
            if stack:
                cur = _move(points, cur, stack[-1][0])
            continue
        seen.add(child)
        cur = _move(points, cur, child)
        stack.append((child, iter(sorted({y for sub in combinations(child, G.k - 1) for y in index[sub]}))))
    return single_color_walk(color, points, G.k)


def find_closed_walk_mod(H: OneKGraph, color: int, residue: int = 1) -> SeqWalk | None:
    """Shortest-found closed single-color walk whose length is ``residue`` mod k.

    States are ordered k-tuples spanning an edge; a closed walk of length L
    is a closed walk of L steps in the state digraph.  Inside a strongly
    connected component whose cycle lengths have gcd g, closed walks of
    every large multiple of g exist, so the residue is reachable iff
    gcd(g, k) divides it.
    """
    G = H.color_graph(color)
    k = G.k
    if not G.edges:
        return None
    index = _edge_index(G)
    D = nx.DiGraph()
    for e in G.sorted_edges:
        for state in permutations(e):
            D.add_node(state)
            tail = state[1:]
            for y in index.get(tuple(sorted(tail)), ()):
                for v in y:
                    if v not in tail:
                        D.add_edge(state, tail + (v,))
    comps = sorted((sorted(c) for c in nx.strongly_connected_components(D)), key=lambda c: c[0])
    for comp in comps:
        members = set(comp)
        start = comp[0]
        if not any(v in members for v in D.successors(start)):
            continue
        level = {start: 0}
        queue = deque([start])
        g = 0
        while queue:
            u = queue.popleft()
            for v in D.successors(u):
                if v not in members:
                    continue
                if v not in level:
                    level[v] = level[u] + 1
                    queue.append(v)
                else:
                    g = gcd(g, level[u] + 1 - level[v])
        if residue % gcd(g, k) != 0:
            continue
        walk = _residue_bfs(D, members, start, k, residue % k)
        if walk is not None:
            return single_color_walk(color, [s[0] for s in walk], k, closed=True)
    return None


def _residue_bfs(D, members, start, k, residue):
    parent = {(start, 0): None}
    queue = deque([(start, 0)])
    while queue:
        node = queue.popleft()
        u, r = node
        for v in D.successors(u):
            if v not in members:
                continue
            nr = (r + 1) % k
            if v == start and nr == residue:
                seq = [u]
                cur = node
                while parent[cur] is not None:
                    cur = parent[cur]
                    seq.append(cur[0])
                seq.reverse()
                return seq
            if (v, nr) not in parent:
                parent[(v, nr)] = node
                queue.append((v, nr))
    return None


# ------------------------------------------------------------------ 2-graphs

def find_switchers(G: KGraph) -> list[tuple]:
    """Edges ab whose endpoints share a neighbor."""
    if G.k != 2:
        raise ValueError("switchers are defined for 2-graphs")
    adj = G.neighbors
    return [(a, b) for a, b in G.sorted_edges if adj[a] & adj[b]]


def is_tight_walk_2(G: KGraph, seq: Sequence[int], closed: bool = False) -> bool:
    """Consecutive vertices adjacent (cyclically when closed)."""
    if len(seq) < 2:
        return False
    pairs = list(zip(seq, seq[1:]))
    if closed:
        pairs.append((seq[-1], seq[0]))
    return all(tuple(sorted(p)) in G.edges for p in pairs)


def _route(adj: dict, src: tuple, targets: set) -> list[int] | None:
    """BFS over directed edges: (x, y) -> (y, z) for z adjacent to y."""
    if src in targets:
        return list(src)
    parent = {src: None}
    queue = deque([src])
    while queue:
        x, y = queue.popleft()
        for z in sorted(adj.get(y, ())):
            nxt = (y, z)
            if nxt in parent:
                continue
            parent[nxt] = (x, y)
            if nxt in targets:
                seq = [z]
                cur = (x, y)
                while cur is not None:
                    seq.append(cur[1])
                    last = cur
                    cur = parent[cur]
                seq.append(last[0])
                seq.reverse()
                return seq
            queue.append(nxt)
    return None


def _restrict(G: KGraph, component) -> KGraph:
    if component is None:
        return G
    comp = component.edges if isinstance(component, KGraph) else component
    return KGraph(G.n, 2, frozenset(tuple(sorted(e)) for e in comp))


def odd_closed_tight_walk(G: KGraph, component=None, start: int | None = None) -> tuple:
    """Closed tight walk of odd length: route to a triangle, go round it, come back.

    Without ``start`` the triangle itself (length 3) is returned.
    """
    H = _restrict(G, component)
    sw = find_switchers(H)
    if not sw:
        raise PreconditionError("component has no switcher", "switcher")
    a, b = sw[0]
    c = min(H.neighbors[a] & H.neighbors[b])
    if start is None or start == a:
        return (a, b, c)
    adj = H.neighbors
    if start not in adj:
        raise PreconditionError(f"vertex {start} is not in the component", "component")
    parent = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    if a not in parent:
        raise PreconditionError(f"vertex {start} cannot reach the switcher", "component")
    path = [a]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()  # start ... a
    return tuple(path[:-1]) + (a, b, c, a) + tuple(reversed(path[1:-1]))


@dataclass(frozen=True)
class StrongConnectivityWitness:
    """Routes between every directed edge and a switcher, joined on demand."""

    host: KGraph
    hub: tuple
    to_hub: dict = field(repr=False)  # directed edge -> walk ending at an orientation of the hub
    from_hub: dict = field(repr=False)  # directed edge -> walk starting at an orientation of the hub

    def directed_edges(self) -> list[tuple]:
        return sorted(self.to_hub)

    def walk(self, D1: tuple, D2: tuple) -> tuple:
        first = list(self.to_hub[tuple(D1)])
        second = self.from_hub[tuple(D2)]
        if tuple(first[-2:]) != tuple(second[:2]):
            # switcher reversal: ... a b  ->  ... a b a
            first.append(first[-2])
        return tuple(first) + tuple(second[2:])


def check_strong_connectivity(G: KGraph) -> StrongConnectivityWitness:
    """Walks joining every ordered pair of directed edges, through a switcher."""
    if G.k != 2:
        raise ValueError("strong connectivity is checked on 2-graphs")
    if not G.edges or not is_tightly_connected(G):
        raise PreconditionError("graph is not tightly connected", "connected")
    sw = find_switchers(G)
    if not sw:
        raise PreconditionError("graph has no switcher", "switcher")
    a, b = sw[0]
    hub = {(a, b), (b, a)}
    adj = G.neighbors
    to_hub, from_hub = {}, {}
    for x, y in G.sorted_edges:
        for D in ((x, y), (y, x)):
            to_hub[D] = tuple(_route(adj, D, hub))
            back = _route(adj, (D[1], D[0]), hub)
            from_hub[D] = tuple(reversed(back))
    return StrongConnectivityWitness(G, (a, b), to_hub, from_hub)


# ------------------------------------------------------------- vicinities

@dataclass(frozen=True)
class Arc:
    color: int
    points: tuple  # v_1 .. v_{k+1}

    def to_json(self) -> dict:
        return {"color": self.color, "points": list(self.points)}


def is_arc(vic: "Vicinity", points: Sequence[int]) -> bool:
    """Check both membership clauses of an arc directly."""
    k = vic.k
    v = tuple(points)
    if len(v) != k + 1:
        return False
    first, second = v[:k - 2], v[1:k - 1]
    for S, edge in ((first, (v[k - 2], v[k - 1])), (second, (v[k - 1], v[k]))):
        key = tuple(sorted(S))
        if len(set(S)) != len(S) or key not in vic.assignment:
            return False
        if tuple(sorted(edge)) not in vic.assignment[key].edges:
            return False
    return True


def find_arc(vic: "Vicinity") -> Arc | None:
    """First arc found by the high-degree-vertex recipe, scanning S canonically."""
    for key in sorted(vic.assignment):
        C = vic.assignment[key]
        if not C.edges:
            continue
        adj = C.neighbors
        order = sorted(adj, key=lambda v: (-len(adj[v]), v))
        for S in permutations(key):
            for hi in order:
                S2 = tuple(sorted(S[1:] + (hi,)))
                C2 = vic.assignment.get(S2)
                if C2 is None or not C2.edges:
                    continue
                adj2 = C2.neighbors
                for mid in sorted(adj[hi]):
                    ends = adj2.get(mid, set())
                    if not ends:
                        continue
                    last = min((u for u in ends if u != (S[0] if S else None)), default=None)
                    if last is None:
                        last = min(ends)
                    arc = S + (hi, mid, last)
                    return Arc(vic.color, arc)
    return None


def arc_hypothesis(vic: "Vicinity") -> dict:
    """Minimum C_S edge density d and whether d + sqrt(d) > 1."""
    t = vic.n
    dens = [Fraction(len(C.edges), comb(t, 2)) for C in vic.assignment.values()] or [Fraction(0)]
    d = min(dens)
    # d + sqrt(d) > 1  <=>  sqrt(d) > 1 - d  <=>  d > (1 - d)^2 when d < 1
    holds = d >= 1 or d > (1 - d) ** 2
    return {"minDensity": d, "holds": holds, "sum": float(d) + float(d) ** 0.5}


def _oriented(edge) -> tuple:
    return tuple(sorted(edge))


def _shared_edge(C1: KGraph, C2: KGraph) -> tuple | None:
    small, big = (C1, C2) if len(C1.edges) <= len(C2.edges) else (C2, C1)
    for e in small.sorted_edges:
        if e in big.edges:
            return e
    return None


def _C(vic: "Vicinity", S: Sequence[int]) -> KGraph:
    key = tuple(sorted(S))
    if key not in vic.assignment:
        raise PreconditionError(f"({vic.color}; {list(S)}) is not in the vicinity's domain", "domain")
    return vic.assignment[key]


def _even_walk_in(C: KGraph, D1: tuple, D2: tuple) -> list[int]:
    """Tight walk in the 2-graph C from D1 to D2 with an even number of vertices.

    Takes the shortest route; when its parity is wrong, reroutes through the
    switcher triangle and adds one copy of it (an odd closed walk), which
    flips the parity.
    """
    for D in (D1, D2):
        if _oriented(D) not in C.edges:
            raise PreconditionError(f"{list(D)} is not an edge of C_S", "edge")
    adj = C.neighbors
    direct = _route(adj, tuple(D1), {tuple(D2)})
    if direct is None:
        raise PreconditionError("C_S is not tightly connected", "V1")
    if len(direct) % 2 == 0:
        return direct
    sw = find_switchers(C)
    if not sw:
        raise PreconditionError("C_S has no switcher", "V3")
    a, b = sw[0]
    c = min(adj[a] & adj[b])
    into = _route(adj, tuple(D1), {(a, b)})
    out = _route(adj, (a, b), {tuple(D2)})
    if into is None or out is None:
        raise PreconditionError("C_S is not tightly connected", "V1")
    base = into + out[2:]
    copies = 1 if len(base) % 2 else 0
    return into + [c, a, b] * copies + out[2:]


def _blocks(S: Sequence[int], seq: Sequence[int]) -> list[int]:
    points: list[int] = []
    for j in range(0, len(seq), 2):
        points.extend(S)
        points.extend(seq[j:j + 2])
    return points


def _same_set(vic, S, D1, D2) -> list[int]:
    return _blocks(S, _even_walk_in(_C(vic, S), D1, D2))


def _one_coordinate(vic, S, T, D1, D2) -> list[int]:
    shared = _shared_edge(_C(vic, S), _C(vic, T))
    if shared is None:
        raise PreconditionError(f"C_S and C_T share no edge for S={list(S)}, T={list(T)}", "V2")
    return _same_set(vic, S, D1, shared) + _same_set(vic, T, shared, D2)


def _general(vic, S, T, D1, D2, trace) -> list[int]:
    diff = [r for r in range(len(S)) if S[r] != T[r]]
    if trace is not None:
        trace.append(len(diff))
    if not diff:
        return _same_set(vic, S, D1, D2)
    if len(diff) == 1:
        return _one_coordinate(vic, S, T, D1, D2)
    shared = _shared_edge(_C(vic, S), _C(vic, T))
    if shared is None:
        raise PreconditionError(f"C_S and C_T share no edge for S={list(S)}, T={list(T)}", "V2")
    p = shared[0]
    idx = diff[0]
    S2 = tuple(S[:idx]) + (p,) + tuple(S[idx + 1:])
    T2 = tuple(T[:idx]) + (p,) + tuple(T[idx + 1:])
    CS2, CT2 = _C(vic, S2), _C(vic, T2)
    if not CS2.edges or not CT2.edges:
        raise PreconditionError("an intermediate C_S is empty", "V2")
    D1b, D2b = CS2.sorted_edges[0], CT2.sorted_edges[0]
    return (_one_coordinate(vic, S, S2, D1, D1b)
            + _general(vic, S2, T2, D1b, D2b, trace)
            + _one_coordinate(vic, T2, T, D2b, D2))


def _check_tuple(vic, S) -> tuple:
    S = tuple(int(v) for v in S)
    if len(S) != vic.k - 2:
        raise ValueError(f"expected a {vic.k - 2}-tuple, got {list(S)}")
    return S


def _finish(vic, S, T, D1, D2, points) -> SeqWalk:
    if tuple(S) == tuple(T) and tuple(D1) == tuple(D2):
        return SeqWalk()
    return single_color_walk(vic.color, points, vic.k)


def build_walk_same_set(vic: "Vicinity", S, D1, D2) -> SeqWalk:
    """Walk of length 0 mod k from S.D1 to S.D2, both directed edges of C_S."""
    S = _check_tuple(vic, S)
    return _finish(vic, S, S, D1, D2, _same_set(vic, S, tuple(D1), tuple(D2)))


def build_walk_one_coordinate(vic: "Vicinity", S, T, D1, D2) -> SeqWalk:
    """Walk of length 0 mod k from S.D1 to T.D2 where S, T differ in one coordinate."""
    S, T = _check_tuple(vic, S), _check_tuple(vic, T)
    if sum(a != b for a, b in zip(S, T)) != 1:
        raise ValueError("S and T must differ in exactly one coordinate")
    return _finish(vic, S, T, D1, D2, _one_coordinate(vic, S, T, tuple(D1), tuple(D2)))


def build_walk_general(vic: "Vicinity", S, T, D1, D2, trace: list | None = None) -> SeqWalk:
    """Walk of length 0 mod k from S.D1 to T.D2 by induction on differing coordinates.

    ``trace`` (if given) receives the number of differing coordinates at
    each level of the induction.
    """
    S, T = _check_tuple(vic, S), _check_tuple(vic, T)
    return _finish(vic, S, T, D1, D2, _general(vic, S, T, tuple(D1), tuple(D2), trace))


def closed_walk_one_mod_k(vic: "Vicinity", shorten: bool = False) -> SeqWalk:
    """Closed single-color walk of length 1 mod k from an arc.

    With arc (v_1..v_{k+1}), walk from (v_2..v_{k+1}) to (v_1..v_k) with
    length 0 mod k, then append v_{k+1} and close up.
    """
    arc = find_arc(vic)
    if arc is None:
        raise PreconditionError(f"vicinity of color {vic.color} has no arc", "V3")
    k = vic.k
    v = arc.points
    S2, D_start = v[1:k - 1], (v[k - 1], v[k])
    S1, D_end = v[:k - 2], (v[k - 2], v[k - 1])
    points = _general(vic, S2, S1, D_start, D_end, None)
    if shorten:
        W = shorten_walk(vic.generated(), single_color_walk(vic.color, points, k))
        points = list(W.points)
    return single_color_walk(vic.color, points + [v[k]], k, closed=True)
