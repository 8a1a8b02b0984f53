"""Vicinities: a chosen 2-graph C_S inside the link of every (1,k-2)-shadow set.

Also the V1-V6 verifier, the Lovász form of Kruskal-Katona, and the
cleanup that turns a degree condition with deleted edges into a perturbed
degree condition on a concrete instance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, sqrt

from .connectivity import arc_hypothesis, find_arc, find_switchers, tight_components
from .core import KGraph, OneKGraph, PerturbedDegreeReport, check_perturbed_degree, link, min_degree, shadow
from .matching import max_fractional_matching


@dataclass(frozen=True)
class Vicinity:
    color: int
    color_count: int
    n: int
    k: int
    assignment: dict = field(hash=False)  # sorted (k-2)-tuple of points -> KGraph (2-uniform)

    def C(self, S) -> KGraph:
        return self.assignment[tuple(sorted(S))]

    def domain(self) -> list[tuple]:
        return sorted(self.assignment)

    def generated(self) -> OneKGraph:
        """The (1,k)-graph with edges {color} + S + A for A in C_S."""
        edges = frozenset((self.color, tuple(sorted(S + A)))
                          for S, C in self.assignment.items() for A in C.edges)
        return OneKGraph(self.color_count, self.n, self.k, edges)

    def to_json(self) -> dict:
        return {"color": self.color, "colorCount": self.color_count, "n": self.n, "k": self.k,
                "assignment": [{"S": list(S), "edges": [list(e) for e in self.assignment[S].sorted_edges]}
                               for S in self.domain()]}

    @classmethod
    def from_json(cls, data) -> "Vicinity":
        n = data["n"]
        assignment = {tuple(sorted(item["S"])): KGraph(n, 2, frozenset(tuple(e) for e in item["edges"]))
                      for item in data["assignment"]}
        return cls(data["color"], data["colorCount"], n, data["k"], assignment)


def shadow_sets(R: OneKGraph, color: int) -> list[tuple]:
    """The (k-2)-point parts of the color's (1,k-2)-shadow, sorted."""
    return sorted({S for c, S in shadow(R.restrict([color]), R.k - 2).edges})


def build_max_vicinity(R: OneKGraph, colors=None) -> dict[int, Vicinity]:
    """C_S = the largest tight component of L(S); ties go to the smaller minimum edge."""
    if R.k < 2:
        raise ValueError("vicinities need k >= 2")
    cols = range(R.color_count) if colors is None else sorted(colors)
    family = {}
    for i in cols:
        assignment = {}
        for S in shadow_sets(R, i):
            L = link(R, (i, S))
            best = tight_components(L).largest()
            assignment[S] = KGraph(R.n, 2, frozenset(best))
        family[i] = Vicinity(i, R.color_count, R.n, R.k, assignment)
    return family


def vicinity_from_links(R: OneKGraph, color: int) -> Vicinity:
    """C_S = L(S) for every S; generates exactly the color's part of R."""
    assignment = {S: link(R, (color, S)) for S in shadow_sets(R, color)}
    return Vicinity(color, R.color_count, R.n, R.k, assignment)


# ------------------------------------------------------------------ verify

@dataclass
class ClauseResult:
    holds: bool = True
    checked: int = 0
    failures: int = 0
    first_failure: dict | None = None
    failing_colors: set = field(default_factory=set)
    witnesses: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def fail(self, color, detail: dict, count: int = 1) -> None:
        self.holds = False
        self.failures += count
        if isinstance(color, (set, frozenset, tuple, list)):
            self.failing_colors.update(color)
        else:
            self.failing_colors.add(color)
        if self.first_failure is None:
            self.first_failure = detail

    def to_json(self) -> dict:
        return {"holds": self.holds, "checked": self.checked, "failures": self.failures,
                "firstFailure": _plain(self.first_failure), "failingColors": sorted(self.failing_colors),
                "summary": _plain(self.summary), "witnesses": _plain(self.witnesses)}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


@dataclass
class VicinityReport:
    gamma: Fraction
    delta: Fraction
    clauses: dict  # "V1".."V6" -> ClauseResult
    arcs: dict  # color -> Arc | None
    arc_hypotheses: dict  # color -> dict

    def holds(self, *names: str) -> bool:
        names = names or tuple(self.clauses)
        return all(self.clauses[n].holds for n in names)

    def color_holds(self, color: int, *names: str) -> bool:
        return all(color not in self.clauses[n].failing_colors for n in names)

    def to_json(self) -> dict:
        return {"gamma": str(self.gamma), "delta": str(self.delta), "holds": self.holds(),
                "clauses": {n: c.to_json() for n, c in self.clauses.items()},
                "arcs": {str(c): (a.to_json() if a else None) for c, a in sorted(self.arcs.items())},
                "arcHypothesis": {str(c): _plain(h) for c, h in sorted(self.arc_hypotheses.items())}}


def v4_threshold(k: int, gamma) -> Fraction:
    return (1 + Fraction(1, k)) * (Fraction(1, k + 1) + Fraction(gamma))


def pairs_share_edge(members: list[tuple], cross_only: bool, res: ClauseResult,
                     pair_witnesses: bool = False) -> None:
    """Check C-sets pairwise for a shared edge, grouping identical edge sets.

    ``members`` holds (edge frozenset, color, S).  With ``cross_only`` only
    pairs of different colors count; otherwise every pair, including a set
    with itself, counts.
    """
    classes: dict[frozenset, list] = {}
    for edges, color, S in members:
        classes.setdefault(edges, []).append((color, S))
    keys = sorted(classes, key=lambda fs: min(classes[fs]))
    for a in range(len(keys)):
        for b in range(a, len(keys)):
            A, B = classes[keys[a]], classes[keys[b]]
            if a == b:
                if cross_only:
                    per = Counter(c for c, _ in A)
                    count = (len(A) * len(A) - sum(v * v for v in per.values())) // 2
                else:
                    count = len(A) * (len(A) + 1) // 2
            else:
                if cross_only:
                    ca, cb = Counter(c for c, _ in A), Counter(c for c, _ in B)
                    count = len(A) * len(B) - sum(ca[c] * cb[c] for c in ca)
                else:
                    count = len(A) * len(B)
            if not count:
                continue
            res.checked += count
            small, big = sorted((keys[a], keys[b]), key=len)
            shared = next((e for e in sorted(small) if e in big), None)
            if shared is None:
                pair = _first_pair(A, B, cross_only, a == b)
                res.fail({pair[0][0], pair[1][0]}, {"first": {"color": pair[0][0], "S": list(pair[0][1])},
                                                    "second": {"color": pair[1][0], "S": list(pair[1][1])}}, count)
            elif pair_witnesses:
                pair = _first_pair(A, B, cross_only, a == b)
                res.witnesses.append({"first": {"color": pair[0][0], "S": list(pair[0][1])},
                                      "second": {"color": pair[1][0], "S": list(pair[1][1])},
                                      "edge": list(shared)})


def _first_pair(A, B, cross_only, same):
    for x in sorted(A):
        for y in sorted(B):
            if cross_only and x[0] == y[0]:
                continue
            if same and y < x:
                continue
            return x, y
    raise AssertionError("no pair in a class pair with positive count")


def verify_vicinity(R: OneKGraph, family: dict[int, Vicinity], gamma, delta,
                    pair_witnesses: bool = False, backend: str = "auto") -> VicinityReport:
    """Evaluate V1-V6 for every color of the family."""
    gamma, delta = Fraction(gamma), Fraction(delta)
    k, t = R.k, R.n
    clauses = {name: ClauseResult() for name in ("V1", "V2", "V3", "V4", "V5", "V6")}
    arcs, hyps = {}, {}
    v4_needed = v4_threshold(k, gamma)
    v5_needed = 1 - delta + gamma
    lp_cache: dict[frozenset, Fraction] = {}
    pairs = comb(t, 2)
    min_v4 = min_v5 = None
    for i in sorted(family):
        vic = family[i]
        for S in vic.domain():
            C = vic.assignment[S]
            extra = [e for e in C.sorted_edges if not R.has(i, S + e)]
            if extra:
                raise ValueError(f"C_S for ({i}; {list(S)}) has edges outside the link: {extra[:3]}")
            where = {"color": i, "S": list(S)}
            # V1
            clauses["V1"].checked += 1
            comps = tight_components(C)
            if not comps.connected:
                clauses["V1"].fail(i, {**where, "components": len(comps.components)})
            # V3 (switcher part)
            clauses["V3"].checked += 1
            sw = find_switchers(C)
            if not sw:
                clauses["V3"].fail(i, {**where, "reason": "no switcher"})
            elif pair_witnesses:
                clauses["V3"].witnesses.append({**where, "switcher": list(sw[0])})
            # V4
            clauses["V4"].checked += 1
            if C.edges not in lp_cache:
                value, _ = max_fractional_matching(C, backend=backend)
                lp_cache[C.edges] = value
            dens = lp_cache[C.edges] / t
            if min_v4 is None or dens < min_v4[0]:
                min_v4 = (dens, where)
            if dens < v4_needed:
                clauses["V4"].fail(i, {**where, "density": dens, "needed": v4_needed})
            # V5
            clauses["V5"].checked += 1
            d5 = Fraction(len(C.edges), pairs)
            if min_v5 is None or d5 < min_v5[0]:
                min_v5 = (d5, where)
            if d5 < v5_needed:
                clauses["V5"].fail(i, {**where, "density": d5, "needed": v5_needed})
        arc = find_arc(vic)
        arcs[i] = arc
        hyps[i] = arc_hypothesis(vic)
        clauses["V3"].checked += 1
        if arc is None:
            clauses["V3"].fail(i, {"color": i, "reason": "no arc"})
        # V2 within the color
        pairs_share_edge([(vic.assignment[S].edges, i, S) for S in vic.domain()], False,
                         clauses["V2"], pair_witnesses)
    # V6 across colors
    members = [(family[i].assignment[S].edges, i, S) for i in sorted(family) for S in family[i].domain()]
    pairs_share_edge(members, True, clauses["V6"], pair_witnesses)
    clauses["V4"].summary = {"needed": v4_needed, "minDensity": None if min_v4 is None else min_v4[0],
                             "at": None if min_v4 is None else min_v4[1]}
    clauses["V5"].summary = {"needed": v5_needed, "minDensity": None if min_v5 is None else min_v5[0],
                             "at": None if min_v5 is None else min_v5[1]}
    return VicinityReport(gamma, delta, clauses, arcs, hyps)


# ------------------------------------------------------- Kruskal-Katona

@dataclass(frozen=True)
class ShadowBoundReport:
    edges: int
    covered: int
    x: float  # positive root of x(x-1)/2 = edges (0 for no edges)
    holds: bool  # covered >= x, decided exactly
    tight: bool  # covered == x
    approx_bound: float | None = None  # (sqrt(density) - eps) * t
    approx_holds: bool | None = None

    def to_json(self) -> dict:
        return {"edges": self.edges, "covered": self.covered, "x": self.x, "holds": self.holds,
                "tight": self.tight, "approxBound": self.approx_bound, "approxHolds": self.approx_holds}


def kruskal_katona_shadow(G: KGraph, eps=None) -> ShadowBoundReport:
    """Non-isolated vertices against the Lovász bound x with e(G) = C(x, 2).

    c >= x with x = (1 + sqrt(1 + 8e)) / 2 is equivalent to
    (2c - 1)^2 >= 1 + 8e for c >= 1, which is checked in integers.
    """
    if G.k != 2:
        raise ValueError("the shadow bound here is for 2-graphs")
    e = len(G.edges)
    c = len(G.non_isolated())
    if e == 0:
        x, holds, tight = 0.0, True, c == 0
    else:
        disc = 1 + 8 * e
        x = (1 + sqrt(disc)) / 2
        holds = c >= 1 and (2 * c - 1) ** 2 >= disc
        tight = c >= 1 and (2 * c - 1) ** 2 == disc
    approx_bound = approx_holds = None
    if eps is not None:
        dens = e / comb(G.n, 2) if G.n >= 2 else 0.0
        approx_bound = (sqrt(dens) - float(eps)) * G.n
        approx_holds = c >= approx_bound
    return ShadowBoundReport(e, c, x, holds, tight, approx_bound, approx_holds)


# ---------------------------------------------------------------- cleanup

class CleanupError(ValueError):
    def __init__(self, message: str, report: PerturbedDegreeReport | None = None, rounds: int = 0):
        super().__init__(message)
        self.report = report
        self.rounds = rounds


def cleanup_perturbed(R_i: OneKGraph, I: OneKGraph | None, alpha, delta=None, color: int | None = None) -> OneKGraph:
    """Delete I, then repeatedly delete edges through P1/P3-violating tuples.

    Stops when the alpha-perturbed minimum relative (1,k-2)-degree is at
    least delta - alpha (delta defaults to the minimum relative
    (1,k-2)-degree of R_i).  Raises ``CleanupError`` when the graph runs
    out of edges or only the P2 density condition is left failing, since
    deletions can only make P2 worse.
    """
    alpha = Fraction(alpha)
    if color is None:
        used = R_i.colors_used()
        if len(used) > 1:
            raise ValueError(f"expected a single-color graph, found colors {used}")
        color = used[0] if used else 0
    if delta is None:
        delta = min_degree(R_i, R_i.k - 2, colors=[color]).relative_degree
    delta = Fraction(delta)
    G = R_i if I is None else R_i.without(I.edges)
    rounds = 0
    while True:
        rep = check_perturbed_degree(G, alpha, delta - alpha, colors=[color])
        if rep.holds:
            return G
        if not G.edges:
            raise CleanupError("cleanup removed every edge", rep, rounds)
        bad = [s for s, _ in rep.p1_violations] + [s for s, _, _ in rep.p3_violations]
        if not bad:
            raise CleanupError("only the P2 density condition fails; deletions cannot repair it", rep, rounds)
        doomed = [(c, e) for c, e in G.edges
                  if any(c == bc and set(bs).issubset(e) for bc, bs in bad)]
        G = G.without(doomed)
        rounds += 1
