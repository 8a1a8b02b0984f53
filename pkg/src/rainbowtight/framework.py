"""Graphs generated by vicinities, the F1-F5 checks, and the end-to-end pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .connectivity import (PreconditionError, closed_walk_one_mod_k, find_closed_walk_mod, is_tightly_connected,
                           tight_cover_walk)
from .core import KGraph, OneKGraph, degree_counts, onek_to_kgraph
from .matching import is_robustly_matchable
from .sequential import validate
from .vicinity import (ClauseResult, Vicinity, VicinityReport, _plain, build_max_vicinity, cleanup_perturbed,
                       pairs_share_edge, verify_vicinity)


def generate_from_vicinity(R: OneKGraph, vic: Vicinity) -> OneKGraph:
    """Edges {i} + S + A over all S in the domain and A in C_S; checked to lie in R."""
    H = vic.generated()
    extra = H.edges - R.edges
    if extra:
        raise ValueError(f"vicinity generates edges outside R, e.g. {sorted(extra)[:3]}")
    return H


def generate_family(R: OneKGraph, family: dict[int, Vicinity]) -> OneKGraph:
    edges = set()
    for i in sorted(family):
        edges |= generate_from_vicinity(R, family[i]).edges
    return OneKGraph(R.color_count, R.n, R.k, frozenset(edges))


def window_colors(t: int, k: int) -> list[range]:
    """Colors split into k consecutive blocks of t/k."""
    if k <= 0 or t % k:
        raise ValueError(f"the color count {t} must be divisible by k = {k}")
    size = t // k
    return [range(r * size, (r + 1) * size) for r in range(k)]


def window_graph(H: OneKGraph, colors) -> KGraph:
    """The (k+1)-graph on window colors plus points (colors come first)."""
    cols = list(colors)
    G, _ = onek_to_kgraph(H.restrict(cols), cols)
    return G


@dataclass
class FrameworkReport:
    alpha: Fraction
    gamma: Fraction
    delta: Fraction
    f1: dict  # color -> bool
    f1_witness: dict  # color -> SeqWalk covering the color's edges
    f2: dict  # color -> SeqWalk | None
    f2_source: dict  # color -> "vicinity" | "search"
    f3: dict  # window index -> RobustReport
    f4: dict  # color -> (count of good points, needed)
    f5: ClauseResult = field(default_factory=ClauseResult)

    def clause(self, name: str) -> bool:
        if name == "F1":
            return all(self.f1.values())
        if name == "F2":
            return all(w is not None for w in self.f2.values())
        if name == "F3":
            return all(r.robust for r in self.f3.values())
        if name == "F4":
            return all(c >= need for c, need in self.f4.values())
        if name == "F5":
            return self.f5.holds
        raise KeyError(name)

    def holds(self) -> bool:
        return all(self.clause(n) for n in ("F1", "F2", "F3", "F4", "F5"))

    def to_json(self, witnesses: bool = True) -> dict:
        out = {
            "alpha": str(self.alpha), "gamma": str(self.gamma), "delta": str(self.delta),
            "holds": self.holds(),
            "clauses": {n: self.clause(n) for n in ("F1", "F2", "F3", "F4", "F5")},
            "F1": {str(c): ok for c, ok in sorted(self.f1.items())},
            "F2": {str(c): (None if w is None else {"length": len(w.points), "source": self.f2_source[c],
                                                     **({"walk": w.to_json()} if witnesses else {})})
                   for c, w in sorted(self.f2.items())},
            "F3": {str(i): r.to_json() for i, r in sorted(self.f3.items())},
            "F4": {str(c): {"goodPoints": cnt, "needed": str(need)} for c, (cnt, need) in sorted(self.f4.items())},
            "F5": self.f5.to_json(),
        }
        if witnesses:
            out["F1witness"] = {str(c): w.to_json() for c, w in sorted(self.f1_witness.items())}
        return out


def verify_framework(H: OneKGraph, alpha, gamma, delta, vicinities: dict[int, Vicinity] | None = None,
                     f3_mode: str = "size", divisor: int | None = None, samples: int = 8, seed: int = 0,
                     backend: str = "auto", f3_exact_vertices: int = 10) -> FrameworkReport:
    """Evaluate F1-F5 on H.

    F2 uses the arc-based construction when a vicinity for the color is
    given and its hypotheses hold, and otherwise searches the state graph of
    ordered windows.  F3 checks each window's (k+1)-graph; by default in the
    size form with divisor k (see ``is_robustly_matchable``); window graphs
    with more than ``f3_exact_vertices`` vertices get sampled corners.
    """
    alpha, gamma, delta = Fraction(alpha), Fraction(gamma), Fraction(delta)
    t, k = H.n, H.k
    if H.color_count != t:
        raise ValueError(f"a framework needs as many colors as points ({H.color_count} != {t})")
    windows = window_colors(t, k)
    f1, f1w, f2, f2src, f3, f4 = {}, {}, {}, {}, {}, {}
    for i in range(t):
        G = H.color_graph(i)
        f1[i] = bool(G.edges) and is_tightly_connected(G)
        if f1[i]:
            f1w[i] = tight_cover_walk(H, i)
        walk, source = None, "search"
        if vicinities is not None and i in vicinities:
            try:
                walk, source = closed_walk_one_mod_k(vicinities[i]), "vicinity"
            except PreconditionError:
                walk = None
        if walk is None:
            walk, source = find_closed_walk_mod(H, i, 1), "search"
        if walk is not None:
            if not validate(H, walk) or len(walk.points) % k != 1 % k:
                raise AssertionError(f"closed-walk witness for color {i} does not replay")
        f2[i], f2src[i] = walk, source
    for idx, cols in enumerate(windows):
        G = window_graph(H, cols)
        div = k if divisor is None else divisor
        f3[idx] = is_robustly_matchable(G, gamma, div, mode=f3_mode, max_exact_vertices=f3_exact_vertices,
                                        samples=samples, seed=seed + idx, backend=backend)
    needed = (1 - alpha) * t
    threshold = 1 - delta + gamma
    counts = degree_counts(H, 1)
    denom = comb(t - 1, k - 1)
    for i in range(t):
        good = sum(1 for v in range(t) if denom and Fraction(counts.get((i, (v,)), 0), denom) >= threshold)
        f4[i] = (good, needed)
    f5 = ClauseResult()
    pairs_share_edge([(H.by_color.get(i, frozenset()), i, ()) for i in range(t)], False, f5)
    return FrameworkReport(alpha, gamma, delta, f1, f1w, f2, f2src, f3, f4, f5)


# ----------------------------------------------------------------- pipeline

@dataclass
class PipelineReport:
    cleaned: OneKGraph
    family: dict
    vicinity: VicinityReport
    generated: OneKGraph
    framework: FrameworkReport
    implications: list  # dicts: name, color, premise, conclusion, holds

    @property
    def implications_hold(self) -> bool:
        return all(item["holds"] for item in self.implications)

    def to_json(self, witnesses: bool = False) -> dict:
        return {
            "cleaned": {"edges": len(self.cleaned.edges)},
            "vicinity": self.vicinity.to_json(),
            "generated": {"edges": len(self.generated.edges)},
            "framework": self.framework.to_json(witnesses),
            "implications": _plain(self.implications),
            "implicationsHold": self.implications_hold,
        }


def pipeline_vicinity_to_framework(R: OneKGraph, alpha, gamma, delta, removed: OneKGraph | None = None,
                                   f3_samples: int = 8, seed: int = 0) -> PipelineReport:
    """cleanup -> maximal vicinities -> V1-V6 -> generated graph -> F1-F5, then the implications.

    Checked implications: per color, V1, V2 and V3 give F1 and F2; V4 for
    every S gives F3; V6 gives F5; for k = 3, V5 gives F4.
    """
    alpha, gamma, delta = Fraction(alpha), Fraction(gamma), Fraction(delta)
    parts = set()
    for i in range(R.color_count):
        Ri = R.restrict([i])
        if not Ri.edges:
            continue
        Ii = None if removed is None else removed.restrict([i])
        parts |= cleanup_perturbed(Ri, Ii, alpha, color=i).edges
    cleaned = OneKGraph(R.color_count, R.n, R.k, frozenset(parts))
    family = build_max_vicinity(cleaned)
    vrep = verify_vicinity(cleaned, family, gamma, delta)
    H = generate_family(cleaned, family)
    frep = verify_framework(H, alpha, gamma, delta, vicinities=family, samples=f3_samples, seed=seed)
    imps = []
    for i in sorted(family):
        premise = vrep.color_holds(i, "V1", "V2", "V3") and bool(family[i].assignment)
        conclusion = frep.f1[i] and frep.f2[i] is not None
        imps.append({"name": "V1,V2,V3 => F1,F2", "color": i, "premise": premise, "conclusion": conclusion,
                     "holds": (not premise) or conclusion})
    premise = vrep.holds("V4")
    imps.append({"name": "V4 => F3", "color": None, "premise": premise, "conclusion": frep.clause("F3"),
                 "holds": (not premise) or frep.clause("F3")})
    premise = vrep.holds("V6")
    imps.append({"name": "V6 => F5", "color": None, "premise": premise, "conclusion": frep.clause("F5"),
                 "holds": (not premise) or frep.clause("F5")})
    if R.k == 3:
        premise = vrep.holds("V5") and all(len(family[i].assignment) >= (1 - alpha) * R.n for i in family)
        imps.append({"name": "V5 => F4", "color": None, "premise": premise, "conclusion": frep.clause("F4"),
                     "holds": (not premise) or frep.clause("F4")})
    return PipelineReport(cleaned, family, vrep, H, frep, imps)
