"""Hypergraph types, degrees, shadows, links and (1,k)-graph conversion.

Colors and points live in separate integer namespaces.  An edge of a
(1,k)-graph is stored as ``(color, points)`` where ``points`` is a sorted
k-tuple, never as a flat (k+1)-set.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

Edge = tuple  # sorted tuple of points
ColoredEdge = tuple  # (color, sorted tuple of points)


class InstanceError(ValueError):
    """Malformed instance data; the message carries the offending location."""


def _canon_points(points: Iterable[int], n: int, size: int | None = None, where: str = "") -> Edge:
    pts = tuple(sorted(int(v) for v in points))
    if size is not None and len(pts) != size:
        raise InstanceError(f"{where}expected {size} points, got {len(pts)}")
    if len(set(pts)) != len(pts):
        raise InstanceError(f"{where}repeated point in {list(pts)}")
    for v in pts:
        if not 0 <= v < n:
            raise InstanceError(f"{where}point {v} out of range [0, {n})")
    return pts


@dataclass(frozen=True)
class KGraph:
    """A k-uniform hypergraph on points ``0..n-1``.

    ``k = 1`` is allowed since links at level k-1 are 1-graphs.
    """

    n: int
    k: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.k < 1:
            raise InstanceError(f"uniformity must be >= 1, got {self.k}")
        if self.n < 0:
            raise InstanceError(f"point count must be >= 0, got {self.n}")
        canon = frozenset(_canon_points(e, self.n, self.k) for e in self.edges)
        object.__setattr__(self, "edges", canon)

    @cached_property
    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @cached_property
    def neighbors(self) -> dict[int, set[int]]:
        """Adjacency sets; meaningful for 2-graphs."""
        adj: dict[int, set[int]] = {}
        for e in self.edges:
            for v in e:
                adj.setdefault(v, set()).update(u for u in e if u != v)
        return adj

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return tuple(sorted(e)) in self.edges

    def non_isolated(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def density(self) -> Fraction:
        total = comb(self.n, self.k)
        return Fraction(len(self.edges), total) if total else Fraction(0)

    @classmethod
    def complete(cls, n: int, k: int) -> "KGraph":
        return cls(n, k, frozenset(combinations(range(n), k)))


@dataclass(frozen=True)
class OneKGraph:
    """A (1,k)-graph: every edge is one color plus k points."""

    color_count: int
    n: int
    k: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.k < 0:
            raise InstanceError(f"point-uniformity must be >= 0, got {self.k}")
        canon = set()
        for item in self.edges:
            c, pts = item
            c = int(c)
            if not 0 <= c < self.color_count:
                raise InstanceError(f"color {c} out of range [0, {self.color_count})")
            canon.add((c, _canon_points(pts, self.n, self.k)))
        object.__setattr__(self, "edges", frozenset(canon))

    @cached_property
    def sorted_edges(self) -> list[ColoredEdge]:
        # points first, then color
        return sorted(self.edges, key=lambda ce: (ce[1], ce[0]))

    @cached_property
    def by_color(self) -> dict[int, frozenset]:
        out: dict[int, set] = {}
        for c, e in self.edges:
            out.setdefault(c, set()).add(e)
        return {c: frozenset(es) for c, es in out.items()}

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, ce) -> bool:
        c, pts = ce
        return (c, tuple(sorted(pts))) in self.edges

    def has(self, color: int, points: Iterable[int]) -> bool:
        return tuple(sorted(points)) in self.by_color.get(color, ())

    def colors_used(self) -> list[int]:
        return sorted(self.by_color)

    def color_graph(self, color: int) -> KGraph:
        """The link k-graph of a single color."""
        return KGraph(self.n, self.k, self.by_color.get(color, frozenset()))

    def restrict(self, colors: Iterable[int]) -> "OneKGraph":
        """Sub-(1,k)-graph on the given colors (color ids are kept)."""
        keep = set(colors)
        return OneKGraph(self.color_count, self.n, self.k,
                         frozenset(ce for ce in self.edges if ce[0] in keep))

    def without(self, removed: Iterable[ColoredEdge]) -> "OneKGraph":
        gone = {(c, tuple(sorted(e))) for c, e in removed}
        return OneKGraph(self.color_count, self.n, self.k, self.edges - gone)

    @classmethod
    def complete(cls, t: int, k: int, colors: Iterable[int] | None = None) -> "OneKGraph":
        cols = range(t) if colors is None else colors
        return cls(t, t, k, frozenset((c, e) for c in cols for e in combinations(range(t), k)))


@dataclass(frozen=True)
class GraphSystem:
    """n k-graphs on a common n-point set, indexed by color."""

    n: int
    k: int
    graphs: tuple
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        graphs = tuple(self.graphs)
        if len(graphs) != self.n:
            raise InstanceError(f"expected {self.n} graphs, got {len(graphs)}")
        for i, g in enumerate(graphs):
            if g.n != self.n or g.k != self.k:
                raise InstanceError(f"graphs[{i}]: has (n={g.n}, k={g.k}), expected ({self.n}, {self.k})")
        object.__setattr__(self, "graphs", graphs)

    def __getitem__(self, color: int) -> KGraph:
        return self.graphs[color]


@dataclass(frozen=True)
class DegreeReport:
    subset: tuple
    degree: int
    relative_degree: Fraction

    @property
    def relative_float(self) -> float:
        return float(self.relative_degree)

    def to_json(self) -> dict:
        return {"subset": _jsonable(self.subset), "degree": self.degree,
                "relativeDegree": str(self.relative_degree),
                "relativeDegreeFloat": self.relative_float}


def _jsonable(x):
    if isinstance(x, (tuple, list, set, frozenset)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def relative(count: int, n: int, k: int, d: int) -> Fraction:
    total = comb(n - d, k - d) if n >= d else 0
    return Fraction(count, total) if total else Fraction(0)


def as_onek_set(S) -> tuple[int, tuple]:
    """Normalise a (1,l)-set given as ``(color, points)``.

    The color slot may also be a one-element collection; anything holding
    more or fewer colors is rejected.
    """
    try:
        c, pts = S
    except (TypeError, ValueError):
        raise ValueError(f"expected (color, points), got {S!r}") from None
    if isinstance(c, (list, tuple, set, frozenset)):
        if len(c) != 1:
            raise ValueError(f"a (1,l)-set holds exactly one color, got {sorted(c)}")
        (c,) = tuple(c)
    return int(c), tuple(sorted(int(v) for v in pts))


def _check_subset(pts: tuple, n: int, k: int, allow_empty: bool) -> None:
    if len(set(pts)) != len(pts):
        raise ValueError(f"repeated point in {pts}")
    for v in pts:
        if not 0 <= v < n:
            raise ValueError(f"point {v} out of range [0, {n})")
    if len(pts) >= k:
        raise ValueError(f"subset of size {len(pts)} must be smaller than k={k}")
    if not pts and not allow_empty:
        raise ValueError("subset must be nonempty")


def degree(H: KGraph | OneKGraph, S) -> DegreeReport:
    """Number of edges containing S, and that count over C(n-d, k-d)."""
    if isinstance(H, OneKGraph):
        c, pts = as_onek_set(S)
        if not 0 <= c < H.color_count:
            raise ValueError(f"color {c} out of range [0, {H.color_count})")
        _check_subset(pts, H.n, H.k, allow_empty=True)
        need = set(pts)
        count = sum(1 for e in H.by_color.get(c, ()) if need.issubset(e))
        return DegreeReport((c, pts), count, relative(count, H.n, H.k, len(pts)))
    pts = tuple(sorted(int(v) for v in S))
    _check_subset(pts, H.n, H.k, allow_empty=False)
    need = set(pts)
    count = sum(1 for e in H.edges if need.issubset(e))
    return DegreeReport(pts, count, relative(count, H.n, H.k, len(pts)))


def degree_counts(H: KGraph | OneKGraph, d: int) -> Counter:
    """Degree of every d-subset (or (1,d)-subset) that lies in some edge."""
    counts: Counter = Counter()
    if isinstance(H, OneKGraph):
        for c, e in H.edges:
            for sub in combinations(e, d):
                counts[(c, sub)] += 1
    else:
        for e in H.edges:
            for sub in combinations(e, d):
                counts[sub] += 1
    return counts


def min_degree(H: KGraph | OneKGraph, d: int, colors: Iterable[int] | None = None) -> DegreeReport:
    """Minimum degree over all d-sets (or (1,d)-sets); first minimiser in canonical order.

    For a (1,k)-graph the color range can be narrowed with ``colors``.
    """
    lo = 0 if isinstance(H, OneKGraph) else 1
    if not lo <= d <= H.k - 1:
        raise ValueError(f"d must lie in [{lo}, {H.k - 1}], got {d}")
    counts = degree_counts(H, d)
    best = None
    if isinstance(H, OneKGraph):
        cols = range(H.color_count) if colors is None else sorted(colors)
        # canonical order: points first, then color
        keys = ((c, sub) for sub in combinations(range(H.n), d) for c in cols)
        keys = sorted(keys, key=lambda cs: (cs[1], cs[0]))
    else:
        keys = combinations(range(H.n), d)
    for key in keys:
        deg = counts.get(key, 0)
        if best is None or deg < best[1]:
            best = (key, deg)
            if deg == 0:
                break
    if best is None:
        raise ValueError(f"no {d}-subsets exist on {H.n} points")
    return DegreeReport(best[0], best[1], relative(best[1], H.n, H.k, d))


def shadow(H: OneKGraph, j: int) -> OneKGraph:
    """The (1,j)-graph of all (1,j)-sets contained in edges of H."""
    if not 0 <= j <= H.k:
        raise ValueError(f"shadow level must lie in [0, {H.k}], got {j}")
    return OneKGraph(H.color_count, H.n, j,
                     frozenset((c, sub) for c, e in H.edges for sub in combinations(e, j)))


def link(H: KGraph | OneKGraph, S) -> KGraph:
    """Link graph of S: all X with X united with S an edge of H."""
    if isinstance(H, OneKGraph):
        c, pts = as_onek_set(S)
        if not 0 <= c < H.color_count:
            raise ValueError(f"color {c} out of range [0, {H.color_count})")
        _check_subset(pts, H.n, H.k, allow_empty=True)
        pool = H.by_color.get(c, ())
    else:
        pts = tuple(sorted(int(v) for v in S))
        _check_subset(pts, H.n, H.k, allow_empty=False)
        pool = H.edges
    need = set(pts)
    out = frozenset(tuple(v for v in e if v not in need) for e in pool if need.issubset(e))
    return KGraph(H.n, H.k - len(pts), out)


def system_to_onek(system: GraphSystem) -> OneKGraph:
    return OneKGraph(system.n, system.n, system.k,
                     frozenset((i, e) for i, g in enumerate(system.graphs) for e in g.edges))


def onek_to_system(H: OneKGraph) -> GraphSystem:
    if H.color_count != H.n:
        raise ValueError("a graph system needs as many colors as points")
    return GraphSystem(H.n, H.k, tuple(H.color_graph(c) for c in range(H.n)))


def onek_to_kgraph(H: OneKGraph, colors: Sequence[int] | None = None) -> tuple[KGraph, dict]:
    """Flatten to a (k+1)-graph on ``colors + points``.

    Color ``colors[r]`` becomes vertex ``r``; point ``v`` becomes vertex
    ``len(colors) + v``.  Returns the graph and the color-to-vertex map.
    """
    cols = list(range(H.color_count)) if colors is None else list(colors)
    pos = {c: r for r, c in enumerate(cols)}
    off = len(cols)
    edges = frozenset((pos[c],) + tuple(off + v for v in e) for c, e in H.edges if c in pos)
    return KGraph(off + H.n, H.k + 1, edges), pos


@dataclass(frozen=True)
class PerturbedDegreeReport:
    alpha: Fraction
    delta: Fraction
    p1_violations: tuple  # ((color, points), relative degree) with level j = len(points)
    p2_density: dict  # level j -> density of the complement of the level-j shadow
    p3_violations: tuple  # ((color, points), level j, relative degree in the complement)

    @property
    def holds(self) -> bool:
        return (not self.p1_violations and not self.p3_violations
                and all(d <= self.alpha for d in self.p2_density.values()))

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha), "delta": str(self.delta), "holds": self.holds,
            "p1Violations": [{"set": _jsonable(s), "relativeDegree": str(r)} for s, r in self.p1_violations],
            "p2Density": {str(j): str(d) for j, d in self.p2_density.items()},
            "p3Violations": [{"set": _jsonable(s), "level": j, "relativeDegree": str(r)}
                             for s, j, r in self.p3_violations],
        }


def check_perturbed_degree(R: OneKGraph, alpha, delta, colors: Iterable[int] | None = None) -> PerturbedDegreeReport:
    """Evaluate P1-P3 of the perturbed minimum (1,k-2)-degree at every level j in [k-2].

    ``colors`` is the color universe the complement shadows are taken in;
    it defaults to every color of the namespace.
    """
    alpha, delta = Fraction(alpha), Fraction(delta)
    cols = list(range(R.color_count)) if colors is None else sorted(set(colors))
    col_set = set(cols)
    t, k = R.n, R.k
    p1, p3 = [], []
    p2: dict[int, Fraction] = {}
    for j in range(1, k - 1):
        counts = degree_counts(R.restrict(cols), j)
        level = set(counts)
        for key in sorted(level, key=lambda cs: (cs[1], cs[0])):
            rel = relative(counts[key], t, k, j)
            if rel < delta:
                p1.append((key, rel))
        universe = len(cols) * comb(t, j)
        p2[j] = Fraction(universe - len(level), universe) if universe else Fraction(0)
        # (1,j-1)-tuples of the shadow one level down, degree taken in the complement
        lower = {(c, sub) for c, e in R.edges if c in col_set for sub in combinations(e, j - 1)}
        present = Counter()
        for c, e in level:
            for sub in combinations(e, j - 1):
                present[(c, sub)] += 1
        for key in sorted(lower, key=lambda cs: (cs[1], cs[0])):
            missing = (t - (j - 1)) - present.get(key, 0)
            rel = Fraction(missing, t - (j - 1))
            if rel >= alpha:
                p3.append((key, j, rel))
    return PerturbedDegreeReport(alpha, delta, tuple(p1), p2, tuple(p3))


# ---------------------------------------------------------------- JSON I/O

def system_to_json(system: GraphSystem) -> dict:
    out = {"n": system.n, "k": system.k,
           "graphs": [[list(e) for e in g.sorted_edges] for g in system.graphs]}
    if system.meta:
        out["meta"] = system.meta
    return out


def system_from_json(data) -> GraphSystem:
    if not isinstance(data, dict):
        raise InstanceError("instance: expected a JSON object")
    for key in ("n", "k", "graphs"):
        if key not in data:
            raise InstanceError(f"instance: missing key '{key}'")
    n, k = data["n"], data["k"]
    if not isinstance(n, int) or not isinstance(k, int) or isinstance(n, bool) or isinstance(k, bool):
        raise InstanceError("instance: 'n' and 'k' must be integers")
    if k < 1 or n < 0:
        raise InstanceError(f"instance: invalid n={n}, k={k}")
    graphs = data["graphs"]
    if not isinstance(graphs, list) or len(graphs) != n:
        raise InstanceError(f"graphs: expected a list of {n} graphs")
    built = []
    for i, g in enumerate(graphs):
        if not isinstance(g, list):
            raise InstanceError(f"graphs[{i}]: expected a list of edges")
        edges = set()
        for j, e in enumerate(g):
            where = f"graphs[{i}][{j}]: "
            if not isinstance(e, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in e):
                raise InstanceError(f"{where}expected a list of integer points")
            edges.add(_canon_points(e, n, k, where))
        built.append(KGraph(n, k, frozenset(edges)))
    return GraphSystem(n, k, tuple(built), dict(data.get("meta", {})))


def onek_to_json(H: OneKGraph) -> dict:
    return {"colorCount": H.color_count, "n": H.n, "k": H.k,
            "edges": [[c, list(e)] for c, e in H.sorted_edges]}


def onek_from_json(data) -> OneKGraph:
    if not isinstance(data, dict):
        raise InstanceError("graph: expected a JSON object")
    for key in ("colorCount", "n", "k", "edges"):
        if key not in data:
            raise InstanceError(f"graph: missing key '{key}'")
    edges = []
    for j, item in enumerate(data["edges"]):
        if (not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], int)
                or not isinstance(item[1], list)):
            raise InstanceError(f"edges[{j}]: expected [color, [points...]]")
        edges.append((item[0], _canon_points(item[1], data["n"], data["k"], f"edges[{j}]: ")))
    return OneKGraph(data["colorCount"], data["n"], data["k"], frozenset(edges))


def load_system(path) -> GraphSystem:
    with open(path) as fh:
        text = fh.read()
    return loads_system(text)


def loads_system(text: str) -> GraphSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return system_from_json(data)


def dumps_system(system: GraphSystem) -> str:
    return json.dumps(system_to_json(system), separators=(",", ":"))


def iter_subsets(n: int, d: int) -> Iterator[tuple]:
    return combinations(range(n), d)
