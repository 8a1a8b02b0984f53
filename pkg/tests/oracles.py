"""Brute-force reference implementations used only by the tests.

None of these import the package's algorithms; they work from definitions.
"""

from collections import deque
from fractions import Fraction
from itertools import combinations, permutations


def tight_components(edges, k):
    """Edge-BFS: two edges are adjacent when they share k-1 points."""
    edges = sorted(set(tuple(sorted(e)) for e in edges))
    seen, comps = set(), []
    for e in edges:
        if e in seen:
            continue
        comp, queue = {e}, deque([e])
        seen.add(e)
        while queue:
            f = queue.popleft()
            for g in edges:
                if g not in seen and len(set(f) & set(g)) == k - 1:
                    seen.add(g)
                    comp.add(g)
                    queue.append(g)
        comps.append(frozenset(comp))
    return comps


def integral_matching(edges):
    """Largest set of pairwise disjoint edges.

    Memoized over the set of still-free vertices: the smallest free vertex
    either stays unmatched or takes an edge inside the free set.
    """
    edges = [frozenset(e) for e in edges]
    verts = sorted({v for e in edges for v in e})
    by_vertex = {v: [e for e in edges if v in e] for v in verts}
    memo = {}

    def go(free):
        if free in memo:
            return memo[free]
        live = [v for v in verts if v in free]
        if not live:
            return 0
        v = live[0]
        rest = free - {v}
        best = go(rest)
        for e in by_vertex[v]:
            if e <= free:
                best = max(best, 1 + go(free - e))
        memo[free] = best
        return best

    return go(frozenset(verts))


def fractional_matching_2graph(n, edges):
    """nu* of a graph: (n - max_S (isolated(G - S) - |S|)) / 2."""
    edges = [tuple(e) for e in edges]
    best = 0
    for r in range(n + 1):
        for S in combinations(range(n), r):
            Sset = set(S)
            alive = [e for e in edges if not (set(e) & Sset)]
            touched = {v for e in alive for v in e}
            iso = sum(1 for v in range(n) if v not in Sset and v not in touched)
            best = max(best, iso - r)
    return Fraction(n - best, 2)


def _solve(M, rhs):
    """Gaussian elimination over Fractions; None if singular."""
    m = len(M)
    A = [list(row) + [b] for row, b in zip(M, rhs)]
    for col in range(m):
        piv = next((r for r in range(col, m) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(m):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[r][m] for r in range(m)]


def lp_by_vertices(c, A_ub, b_ub):
    """max c.x, A_ub x <= b_ub, x >= 0, by enumerating every basic solution.

    Assumes a bounded feasible region.  Returns None if infeasible.
    """
    n = len(c)
    rows = [[Fraction(v) for v in r] for r in A_ub] + [[Fraction(-1 if j == i else 0) for j in range(n)]
                                                       for i in range(n)]
    rhs = [Fraction(b) for b in b_ub] + [Fraction(0)] * n
    best = None
    for idx in combinations(range(len(rows)), n):
        x = _solve([rows[i] for i in idx], [rhs[i] for i in idx])
        if x is None:
            continue
        if all(sum(r[j] * x[j] for j in range(n)) <= b for r, b in zip(rows, rhs)):
            val = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
            if best is None or val > best:
                best = val
    return best


def has_rainbow_hamilton(n, k, graphs):
    """Every order starting at 0, then a permanent-style DP for a color bijection."""
    edge_sets = [set(tuple(sorted(e)) for e in g) for g in graphs]
    for rest in permutations(range(1, n)):
        order = (0,) + rest
        wins = [tuple(sorted(order[(i + r) % n] for r in range(k))) for i in range(n)]
        options = [[c for c in range(n) if w in edge_sets[c]] for w in wins]
        if any(not o for o in options):
            continue
        reach = {0}
        for opts in options:
            reach = {mask | (1 << c) for mask in reach for c in opts if not mask & (1 << c)}
            if not reach:
                break
        if reach:
            return True
    return False


def closed_walk_ok(edges_by_color, colors, points, k):
    """Every cyclic window is an edge of its color."""
    L = len(points)
    for i in range(L):
        win = tuple(sorted(points[(i + r) % L] for r in range(k)))
        if win not in edges_by_color.get(colors[i], set()):
            return False
    return True


def open_walk_ok(edges_by_color, colors, points, k):
    if len(colors) != max(0, len(points) - k + 1):
        return False
    for i, c in enumerate(colors):
        win = points[i:i + k]
        if len(set(win)) != k or tuple(sorted(win)) not in edges_by_color.get(c, set()):
            return False
    return True
