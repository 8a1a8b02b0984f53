"""Fractional and b-fractional matchings, robust matchability, and lifting link matchings.

Exact rational arithmetic is the default.  Large programs (many edges on
many vertices) are solved in floating point first and then re-solved
exactly on the support of the float optimum, so every certificate that
leaves this module has been checked in rational arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .core import KGraph, OneKGraph, link
from .lp import FLOAT_TOL, solve_lp

SMALL_CELLS = 120  # |E| * (|V| + 1) up to which the exact simplex runs directly
EXACT_CELLS = 60_000  # above this the full exact simplex is never attempted


class HypothesisError(ValueError):
    """A construction's hypothesis fails on this instance."""


@dataclass(frozen=True)
class VertexWeighting:
    values: tuple  # b(v) for v = 0..n-1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def uniform(cls, n: int, value=1) -> "VertexWeighting":
        return cls((Fraction(value),) * n)

    def __getitem__(self, v: int) -> Fraction:
        return self.values[v]

    def __len__(self) -> int:
        return len(self.values)

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def within(self, lo, hi=1) -> bool:
        lo, hi = Fraction(lo), Fraction(hi)
        return all(lo <= v <= hi for v in self.values)


def as_weighting(b, n: int) -> VertexWeighting:
    if b is None:
        return VertexWeighting.uniform(n)
    if isinstance(b, VertexWeighting):
        w = b
    elif isinstance(b, Mapping):
        w = VertexWeighting(tuple(b.get(v, 1) for v in range(n)))
    elif isinstance(b, (int, float, Fraction, str)):
        w = VertexWeighting.uniform(n, Fraction(b))
    else:
        w = VertexWeighting(tuple(b))
    if len(w) != n:
        raise ValueError(f"weighting has {len(w)} entries for {n} vertices")
    return w


@dataclass(frozen=True)
class FractionalMatching:
    host: KGraph | OneKGraph = field(repr=False)
    weights: dict  # edge -> Fraction, nonzero entries only

    @property
    def size(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def point_loads(self) -> dict[int, Fraction]:
        loads = {v: Fraction(0) for v in range(self.host.n)}
        for e, w in self.weights.items():
            pts = e[1] if isinstance(self.host, OneKGraph) else e
            for v in pts:
                loads[v] += w
        return loads

    def color_loads(self) -> dict[int, Fraction]:
        if not isinstance(self.host, OneKGraph):
            raise TypeError("color loads exist only for (1,k)-graphs")
        loads = {c: Fraction(0) for c in range(self.host.color_count)}
        for (c, _), w in self.weights.items():
            loads[c] += w
        return loads

    def violations(self, b=None) -> list[str]:
        """Load and range violations against b (default b = 1) for a k-graph host."""
        out = []
        for e, w in self.weights.items():
            if e not in self.host.edges:
                out.append(f"{e} is not an edge")
            if not 0 <= w <= 1:
                out.append(f"weight {w} on {e} outside [0, 1]")
        if isinstance(self.host, KGraph):
            bw = as_weighting(b, self.host.n)
            for v, load in self.point_loads().items():
                if load > bw[v]:
                    out.append(f"load {load} at {v} exceeds {bw[v]}")
        return out

    def to_json(self) -> dict:
        items = sorted(self.weights.items(), key=lambda kv: (kv[0][1], kv[0][0]) if isinstance(self.host, OneKGraph) else kv[0])
        if isinstance(self.host, OneKGraph):
            ws = [{"color": c, "edge": list(e), "weight": str(w)} for (c, e), w in items]
        else:
            ws = [{"edge": list(e), "weight": str(w)} for e, w in items]
        return {"size": str(self.size), "weights": ws}


def matching_density(m: FractionalMatching, vertex_count: int | None = None) -> Fraction:
    """Size over the number of host vertices (points, plus colors for (1,k)-graphs)."""
    if vertex_count is None:
        vertex_count = m.host.n + (m.host.color_count if isinstance(m.host, OneKGraph) else 0)
    return m.size / vertex_count if vertex_count else Fraction(0)


def _incidence(edges: Sequence[tuple], n: int) -> list[list[int]]:
    rows = [[0] * len(edges) for _ in range(n)]
    for j, e in enumerate(edges):
        for v in e:
            rows[v][j] = 1
    return rows


def _choose_backend(backend: str, n_edges: int, n_rows: int) -> str:
    if backend != "auto":
        return backend
    return "exact" if n_edges * (n_rows + 1) <= SMALL_CELLS else "certify"


def _packing(edges: list, n: int, caps: Sequence[Fraction], backend: str, target: Fraction | None = None):
    """Maximum-size weighting of ``edges`` with vertex loads at most ``caps``; returns (value, weights).

    The ``certify`` route solves in floating point, then re-solves exactly on
    the support of the float optimum.  The exact value is a certified lower
    bound and equals the optimum whenever the float support is right; if it
    falls short of the float value (or of ``target``, when the float value
    reached it) the full exact program is solved instead.
    """
    if not edges:
        return Fraction(0), {}
    touched = sorted({v for e in edges for v in e})
    pos = {v: r for r, v in enumerate(touched)}
    local = [tuple(pos[v] for v in e) for e in edges]
    A = _incidence(local, len(touched))
    b = [caps[v] for v in touched]
    mode = _choose_backend(backend, len(edges), len(touched))
    if mode == "certify":
        res = solve_lp([1] * len(edges), A, [float(x) for x in b], backend="float")
        support = [j for j, x in enumerate(res.x) if x > FLOAT_TOL]
        sub = [[row[j] for j in support] for row in A]
        exact = solve_lp([1] * len(support), sub, b, backend="exact")
        value = exact.value
        short = value < res.value - 1e-7 or (target is not None and value < target <= res.value + 1e-7)
        if not short or len(edges) * (len(touched) + 1) > EXACT_CELLS:
            return value, {edges[support[i]]: x for i, x in enumerate(exact.x) if x}
        mode = "exact"
    res = solve_lp([1] * len(edges), A, b, backend=mode)
    return res.value, {edges[j]: x for j, x in enumerate(res.x) if x}


def max_fractional_matching(G: KGraph, b=None, backend: str = "auto") -> tuple[Fraction, FractionalMatching]:
    """nu(G, b): the largest total weight with every vertex load at most b(v)."""
    bw = as_weighting(b, G.n)
    edges = G.sorted_edges
    value, weights = _packing(edges, G.n, bw.values, backend)
    return value, FractionalMatching(G, weights)


def max_integral_matching(G: KGraph) -> int:
    """Largest set of pairwise disjoint edges, by branching on the smallest uncovered vertex."""
    by_vertex: dict[int, list[tuple]] = {}
    for e in G.sorted_edges:
        by_vertex.setdefault(e[0], []).append(e)
    order = sorted(by_vertex)

    def best(idx: int, used: frozenset) -> int:
        while idx < len(order) and order[idx] in used:
            idx += 1
        if idx == len(order):
            return 0
        v = order[idx]
        top = best(idx + 1, used)
        for e in by_vertex[v]:
            if not used.intersection(e):
                top = max(top, 1 + best(idx + 1, used | set(e)))
        return top

    return best(0, frozenset())


# --------------------------------------------------------- robust matchability

@dataclass(frozen=True)
class RobustReport:
    robust: bool
    mode: str
    gamma: Fraction
    divisor: int
    exhaustive: bool
    corners_checked: int
    counterexample: tuple | None = None  # first failing corner b
    shortfall: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "robust": self.robust, "mode": self.mode, "gamma": str(self.gamma), "divisor": self.divisor,
            "exhaustive": self.exhaustive, "cornersChecked": self.corners_checked,
            "counterexample": None if self.counterexample is None else [str(v) for v in self.counterexample],
            "shortfall": None if self.shortfall is None else str(self.shortfall),
        }


def _corners(n: int, gamma: Fraction, exhaustive: bool, samples: int, seed: int):
    lo = 1 - gamma
    if gamma == 0:
        yield (Fraction(1),) * n
        return
    if exhaustive:
        for bits in product((0, 1), repeat=n):
            yield tuple(lo if bit else Fraction(1) for bit in bits)
        return
    yield (Fraction(1),) * n
    yield (lo,) * n
    rng = random.Random(f"robust:{seed}:{n}")
    for _ in range(samples):
        yield tuple(lo if rng.random() < 0.5 else Fraction(1) for _ in range(n))


def corner_holds(H: KGraph, b: Sequence[Fraction], divisor: int, mode: str, backend: str = "auto"):
    """Whether one weighting b passes; returns (ok, shortfall)."""
    edges = H.sorted_edges
    if mode == "equality":
        if not edges:
            return all(v == 0 for v in b), None
        A = _incidence(edges, H.n)
        rhs = [Fraction(v) / divisor for v in b]
        if _choose_backend(backend, len(edges), H.n) == "exact":
            return solve_lp([0] * len(edges), A_eq=A, b_eq=rhs, backend="exact").optimal, None
        res = solve_lp([0] * len(edges), A_eq=A, b_eq=[float(v) for v in rhs], backend="float")
        if res.optimal:
            support = [j for j, x in enumerate(res.x) if x > FLOAT_TOL]
            sub = [[row[j] for j in support] for row in A]
            if solve_lp([0] * len(support), A_eq=sub, b_eq=rhs, backend="exact").optimal:
                return True, None
        if len(edges) * (H.n + 1) > EXACT_CELLS:
            return res.optimal, None
        return solve_lp([0] * len(edges), A_eq=A, b_eq=rhs, backend="exact").optimal, None
    if mode == "size":
        target = sum(b, Fraction(0)) / (H.k * divisor)
        value, _ = _packing(edges, H.n, list(b), backend, target)
        ok = value >= target
        return ok, None if ok else Fraction(target - value)
    raise ValueError(f"unknown robust-matchability mode {mode!r}")


def is_robustly_matchable(H: KGraph, gamma, divisor: int | None = None, mode: str = "equality",
                          max_exact_vertices: int = 16, samples: int = 32, seed: int = 0,
                          backend: str = "auto") -> RobustReport:
    """Check every corner of the box [1-gamma, 1]^V (or a sample of corners for large V).

    ``equality`` asks for weights with load exactly b(v)/divisor at every
    vertex.  The set of b admitting such weights is a convex cone, so the box
    lies inside it as soon as its corners do.  ``size`` asks for a
    b-fractional matching of size at least sum(b)/(uniformity*divisor); the
    optimum nu(H, b) is concave in b while the target is linear, so again the
    corners decide.  Beyond ``max_exact_vertices`` corners are sampled and
    the report says it is not exhaustive.
    """
    gamma = Fraction(gamma)
    if divisor is None:
        divisor = H.k - 1
    if divisor <= 0:
        raise ValueError("divisor must be positive")
    exhaustive = H.n <= max_exact_vertices or gamma == 0
    checked = 0
    for b in _corners(H.n, gamma, exhaustive, samples, seed):
        checked += 1
        ok, short = corner_holds(H, b, divisor, mode, backend)
        if not ok:
            return RobustReport(False, mode, gamma, divisor, exhaustive, checked, b, short)
    return RobustReport(True, mode, gamma, divisor, exhaustive, checked)


# ------------------------------------------------------------- constructions

def lift_link_matchings(R: OneKGraph, per_color: Mapping[int, FractionalMatching | Mapping],
                        b=None, colors: Iterable[int] | None = None, b_colors=None) -> FractionalMatching:
    """Combine per-color link matchings into one matching of R.

    Each color c contributes w(c + e) = w_c(e) / n.  All w_c are first
    scaled down to the common size m = min size.  Requires |colors| * k = n,
    m <= n / k and m <= sum(b) / (k + 1), the sum running over points and
    colors; the lifted matching then has size m / k, color loads m / n and
    point loads at most b(v) / k.
    """
    cols = sorted(range(R.color_count) if colors is None else set(colors))
    n, k = R.n, R.k
    if len(cols) * k != n:
        raise HypothesisError(f"need |colors| * k = n, got {len(cols)} * {k} != {n}")
    bw = as_weighting(b, n)
    bc = dict(zip(cols, as_weighting(b_colors, len(cols)).values))
    maps = {}
    for c in cols:
        w = per_color.get(c, {})
        w = dict(w.weights) if isinstance(w, FractionalMatching) else {tuple(sorted(e)): Fraction(x) for e, x in w.items()}
        link_edges = R.by_color.get(c, frozenset())
        loads = {v: Fraction(0) for v in range(n)}
        for e, x in w.items():
            if e not in link_edges:
                raise HypothesisError(f"color {c}: {list(e)} is not an edge of the link")
            if not 0 <= x <= 1:
                raise HypothesisError(f"color {c}: weight {x} outside [0, 1]")
            for v in e:
                loads[v] += x
        for v, load in loads.items():
            if load > bw[v]:
                raise HypothesisError(f"color {c}: load {load} at point {v} exceeds b = {bw[v]}")
        maps[c] = w
    if not maps:
        return FractionalMatching(R, {})
    sizes = {c: sum(w.values(), Fraction(0)) for c, w in maps.items()}
    m = min(sizes.values())
    if m > Fraction(n, k):
        raise HypothesisError(f"common size {m} exceeds n/k = {Fraction(n, k)}")
    total_b = bw.total() + sum(bc.values(), Fraction(0))
    if m > total_b / (k + 1):
        raise HypothesisError(f"common size {m} exceeds sum(b)/(k+1) = {total_b / (k + 1)}")
    for c in cols:
        if Fraction(m, n) > bc[c]:
            raise HypothesisError(f"color load {Fraction(m, n)} exceeds b = {bc[c]} at color {c}")
    lifted = {}
    for c, w in maps.items():
        scale = m / sizes[c] if sizes[c] else Fraction(0)
        for e, x in w.items():
            if x:
                lifted[(c, e)] = x * scale / n
    return FractionalMatching(R, lifted)


def remove_isolated_then_match(H: KGraph, b=None, m=0, alpha=0, backend: str = "auto") -> FractionalMatching:
    """Strip isolated vertices, solve on the rest, re-attach them with zero load.

    Checks the hypothesis first: at most alpha*|V| isolated vertices, every
    other vertex's link has a b-fractional matching of size m, and
    m <= sum(b)/k.  Returns a maximum b-fractional matching of H, whose size
    is then at least m.
    """
    bw = as_weighting(b, H.n)
    m, alpha = Fraction(m), Fraction(alpha)
    touched = H.non_isolated()
    isolated = H.n - len(touched)
    if isolated > alpha * H.n:
        raise HypothesisError(f"{isolated} isolated vertices exceed alpha*|V| = {alpha * H.n}")
    if m > bw.total() / H.k:
        raise HypothesisError(f"m = {m} exceeds sum(b)/k = {bw.total() / H.k}")
    if H.k >= 2:
        for v in sorted(touched):
            value, _ = max_fractional_matching(link(H, [v]), bw, backend)
            if value < m:
                raise HypothesisError(f"link of {v} has b-matching size {value} < m = {m}")
    keep = sorted(touched)
    pos = {v: r for r, v in enumerate(keep)}
    stripped = KGraph(len(keep), H.k, frozenset(tuple(pos[v] for v in e) for e in H.edges))
    value, local = max_fractional_matching(stripped, [bw[v] for v in keep], backend)
    if value < m:
        raise HypothesisError(f"matching of size {value} falls short of m = {m}")
    weights = {tuple(keep[i] for i in e): x for e, x in local.weights.items()}
    return FractionalMatching(H, weights)
