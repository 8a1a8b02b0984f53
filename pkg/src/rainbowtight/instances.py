"""Instance generators and the X-trap checker.

Every generated system carries a ``meta`` block naming its generator, the
parameters and the achieved minimum relative (k-2)-degree per color.
"""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations, count, islice
from math import comb

from .core import GraphSystem, InstanceError, KGraph, OneKGraph, system_to_onek
from .sequential import SeqWalk


def _low_degrees(edges, n: int, k: int) -> Counter:
    d = k - 2
    counts = Counter({S: 0 for S in combinations(range(n), d)})
    for e in edges:
        for S in combinations(e, d):
            counts[S] += 1
    return counts


def min_low_degree(g: KGraph) -> Fraction:
    """Minimum relative (k-2)-degree; normalized by C(n-k+2, 2)."""
    denom = comb(g.n - g.k + 2, 2)
    if denom == 0:
        return Fraction(0)
    return Fraction(min(_low_degrees(g.edges, g.n, g.k).values()), denom)


def _meta(generator: str, params: dict, graphs) -> dict:
    return {"generator": generator, "params": params,
            "minRelDegree": [str(min_low_degree(g)) for g in graphs]}


def complete_system(n: int, k: int) -> GraphSystem:
    if k < 1 or n < k:
        raise InstanceError(f"need n >= k >= 1, got n={n}, k={k}")
    g = KGraph.complete(n, k)
    graphs = (g,) * n
    return GraphSystem(n, k, graphs, _meta("complete", {"n": n, "k": k}, graphs[:1] * n))


def _repair(edges: set, n: int, k: int, target: Fraction) -> set:
    """Add edges until every (k-2)-set reaches the target relative degree."""
    denom = comb(n - k + 2, 2)
    need = -(-target.numerator * denom // target.denominator)  # ceil(target * denom)
    counts = _low_degrees(edges, n, k)
    while True:
        low = [S for S in sorted(counts) if counts[S] < need]
        if not low:
            return edges
        lowest = min(low, key=lambda S: counts[S])
        deficient = set(low)
        best, best_gain = None, -1
        rest = [v for v in range(n) if v not in lowest]
        for pair in combinations(rest, 2):
            e = tuple(sorted(lowest + pair))
            if e in edges:
                continue
            gain = sum(1 for S in combinations(e, k - 2) if S in deficient)
            if gain > best_gain:
                best, best_gain = e, gain
        if best is None:  # the lowest set is saturated, which only happens when need > denom
            raise InstanceError("target degree unreachable")
        edges.add(best)
        for S in combinations(best, k - 2):
            counts[S] += 1


def random_system(n: int, k: int, target, seed: int) -> GraphSystem:
    """Independent edge inclusion at rate ``target``, then greedy upward repair per color.

    Repair adds the missing edge through the current lowest (k-2)-set that
    covers the most deficient (k-2)-sets, ties broken by canonical order.
    """
    target = Fraction(target)
    if not 0 <= target <= 1:
        raise InstanceError(f"target degree must lie in [0, 1], got {target}")
    if k < 2 or n < k:
        raise InstanceError(f"need n >= k >= 2, got n={n}, k={k}")
    all_edges = list(combinations(range(n), k))
    graphs = []
    for i in range(n):
        rng = random.Random(f"rhk:{seed}:{i}")
        edges = {e for e in all_edges if rng.random() < target}
        if target > 0:
            edges = _repair(edges, n, k, target)
        graphs.append(KGraph(n, k, frozenset(edges)))
    params = {"n": n, "k": k, "target": str(target), "seed": seed}
    return GraphSystem(n, k, tuple(graphs), _meta("random", params, graphs))


def xy_obstruction(n: int, x_size: int) -> GraphSystem:
    """Every color holds the triples meeting X = {0..x_size-1} in 0, 1 or 3 points."""
    if n < 3:
        raise InstanceError(f"need n >= 3, got {n}")
    if x_size < 0 or 3 * x_size >= n:
        raise InstanceError(f"need 0 <= x_size < n/3, got x_size={x_size}, n={n}")
    edges = frozenset(e for e in combinations(range(n), 3) if sum(1 for v in e if v < x_size) != 2)
    g = KGraph(n, 3, edges)
    graphs = (g,) * n
    return GraphSystem(n, 3, graphs, _meta("xy", {"n": n, "xSize": x_size}, graphs))


def _distinct_colors(H: OneKGraph, points: list[int]) -> tuple | None:
    """Give each window of ``points`` its own color, if possible (augmenting paths)."""
    k = H.k
    wins = [tuple(sorted(points[i:i + k])) for i in range(len(points) - k + 1)]
    options = [[c for c in range(H.color_count) if H.has(c, w)] for w in wins]
    owner: dict[int, int] = {}

    def augment(w, seen):
        for c in options[w]:
            if c not in seen:
                seen.add(c)
                if c not in owner or augment(owner[c], seen):
                    owner[c] = w
                    return True
        return False

    if not all(augment(w, set()) for w in range(len(wins))):
        return None
    colors = [0] * len(wins)
    for c, w in owner.items():
        colors[w] = c
    return tuple(colors)


def check_x_trap(system: GraphSystem, X) -> tuple[bool, SeqWalk | None]:
    """Do all tight paths that start with two points of X stay inside X?

    Paths are searched in the union of the colors; an escape is returned as
    a rainbow sequentially path when its windows can get distinct colors,
    and otherwise with colors all set to -1.
    """
    if system.k != 3:
        raise InstanceError("the X-trap check is defined for 3-graphs")
    H = system_to_onek(system)
    Xs = set(X)
    union: dict[tuple, set] = {}
    for _, e in H.edges:
        for a, b in combinations(e, 2):
            union.setdefault((a, b), set()).update(v for v in e if v != a and v != b)

    def third(a, b):
        return union.get((min(a, b), max(a, b)), set())

    for a in sorted(Xs):
        for b in sorted(Xs):
            if a == b:
                continue
            stack = [[a, b]]
            while stack:
                path = stack.pop()
                used = set(path)
                for v in sorted(third(path[-2], path[-1])):
                    if v in used:
                        continue
                    if v not in Xs:
                        pts = path + [v]
                        cols = _distinct_colors(H, pts)
                        if cols is None:
                            cols = (-1,) * (len(pts) - 2)
                        return False, SeqWalk(cols, tuple(pts))
                    stack.append(path + [v])
    return True, None


def gadget_instance(k: int = 3):
    """A hand-built absorbing gadget for (T, O) and the path P running through it.

    P visits the pieces (C, AE), (C_i, P_i b_i Q_i), (C', A'E'),
    (C'_i, P'_i b'_i Q'_i) in this order, joined by windows with fresh
    junction colors.  The graph holds P plus the rerouted pieces, so the
    rerouted path exists with the same junctions.  Returns
    ``(G, gadget, T, O, P, P_rerouted)``.
    """
    from .solver import AbsorbingGadget

    if k < 2:
        raise ValueError("k must be at least 2")
    nxt = count()

    def pts(m):
        return tuple(islice(nxt, m))

    A, B, E = pts(k), pts(k), pts(k)
    P = tuple(pts(k - 1) for _ in range(k))
    Q = tuple(pts(k - 1) for _ in range(k))
    A2, B2, E2 = pts(k), pts(k), pts(k)
    P2 = tuple(pts(k - 1) for _ in range(k))
    Q2 = tuple(pts(k - 1) for _ in range(k))
    T = pts(k)
    n = next(nxt)
    cn = count()

    def cols(m):
        return tuple(islice(cn, m))

    C = cols(k + 1)
    Cs = tuple(cols(k) for _ in range(k))
    C2 = cols(k + 1)
    Cs2 = tuple(cols(k) for _ in range(k))
    O = cols(k)
    gadget = AbsorbingGadget(A, B, E, C, Cs, P, Q, A2, B2, E2, C2, Cs2, P2, Q2)

    plain = [(C, A + E)] + [(Cs[i], P[i] + (B[i],) + Q[i]) for i in range(k)]
    plain += [(C2, A2 + E2)] + [(Cs2[i], P2[i] + (B2[i],) + Q2[i]) for i in range(k)]
    firsts = tuple(c[0] for c in Cs)
    rerouted = [(C, A + E)] + [((O[i],) + Cs[i][1:], P[i] + (B[i],) + Q[i]) for i in range(k)]
    rerouted += [(C2 + firsts, A2 + B2 + E2)] + [(Cs2[i], P2[i] + (T[i],) + Q2[i]) for i in range(k)]
    junction = cols((len(plain) - 1) * (k - 1))
    color_count = next(cn)

    def join(pieces):
        colors, points, j = [], [], 0
        for idx, (c, p) in enumerate(pieces):
            if idx:
                colors.extend(junction[j:j + k - 1])
                j += k - 1
            colors.extend(c)
            points.extend(p)
        return SeqWalk(tuple(colors), tuple(points))

    walk, walk2 = join(plain), join(rerouted)
    edges = set()
    for W in (walk, walk2):
        for c, window in W.windows(k):
            edges.add((c, tuple(sorted(window))))
    G = OneKGraph(color_count, n, k, frozenset(edges))
    return G, gadget, T, O, walk, walk2
