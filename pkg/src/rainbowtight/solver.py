"""Exact search for rainbow tight Hamilton cycles and absorbing paths.

Both searches place points one at a time.  Every window whose points are
all placed gets its set of admissible colors; colors are assigned lazily
by keeping a maximum bipartite matching from placed windows to colors.  A
window that cannot be matched is a Hall violation and the branch is cut.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import GraphSystem, OneKGraph, system_to_onek
from .sequential import SeqWalk, is_path, validate

PRUNING_LEVELS = ("none", "hall", "hall+degree")


@dataclass(frozen=True)
class SearchConfig:
    time_limit: int | None = None  # milliseconds
    node_limit: int | None = None
    seed: int | None = None
    pruning: str = "hall"
    check_every: int = 1
    exact: bool = True

    def __post_init__(self):
        if self.pruning not in PRUNING_LEVELS:
            raise ValueError(f"pruning must be one of {PRUNING_LEVELS}")
        for name in ("time_limit", "node_limit"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")
        if self.check_every < 1:
            raise ValueError("check_every must be at least 1")


@dataclass
class SearchResult:
    status: str  # "found" | "absent" | "exhausted"
    walk: SeqWalk | None
    nodes: int
    millis: int
    stats: dict = field(default_factory=dict)

    def to_json(self, timing: bool = True) -> dict:
        out = {"status": self.status, "nodes": self.nodes}
        if self.walk is not None:
            out["cycle" if self.walk.closed else "path"] = self.walk.to_json()
        if timing:
            out["millis"] = self.millis
        return out


class _Limit(Exception):
    pass


class _RainbowSearch:
    """Fill positions with the point pool so every window gets its own color.

    ``prefix`` and ``suffix`` fix the first and last points.  For cyclic
    searches windows wrap around and the first point is anchored; a
    reflection is removed by requiring position 1 to hold a smaller point
    than the last position.
    """

    def __init__(self, H: OneKGraph, pool: Sequence[int], colors: Sequence[int], cyclic: bool,
                 prefix: Sequence[int], suffix: Sequence[int], cfg: SearchConfig, break_reflection: bool):
        self.k = H.k
        self.pool = list(pool)
        self.L = len(self.pool)
        self.colors = sorted(set(colors))
        self.cyclic = cyclic
        self.prefix = list(prefix)
        self.suffix = list(suffix)
        self.cfg = cfg
        self.break_reflection = break_reflection
        allowed = set(self.colors)
        pool_set = set(self.pool)
        self.admissible: dict[tuple, list[int]] = {}
        self.cover: dict[int, set] = {c: set() for c in self.colors}
        for c, e in H.edges:
            if c in allowed and pool_set.issuperset(e):
                self.admissible.setdefault(e, []).append(c)
                self.cover[c].update(e)
        for lst in self.admissible.values():
            lst.sort()
        self.rng = random.Random(cfg.seed) if cfg.seed is not None else None
        self.nodes = 0
        self.start = time.perf_counter()
        self.seq: list[int] = []
        self.used: set[int] = set()
        self.window_colors: dict[int, list[int]] = {}  # window start -> admissible colors
        self.owner: dict[int, int] = {}  # color -> window
        self.assigned: dict[int, int] = {}  # window -> color
        self.pending: list[int] = []
        self.depth_since_check = 0

    # -- matching
    def _augment(self, w: int, seen: set) -> bool:
        for c in self.window_colors[w]:
            if c in seen:
                continue
            seen.add(c)
            other = self.owner.get(c)
            if other is None or self._augment(other, seen):
                self.owner[c] = w
                self.assigned[w] = c
                return True
        return False

    def _drop(self, w: int) -> None:
        c = self.assigned.pop(w, None)
        if c is not None:
            del self.owner[c]
        if w in self.pending:
            self.pending.remove(w)
        del self.window_colors[w]

    def _check(self) -> bool:
        while self.pending:
            w = self.pending[-1]
            if not self._augment(w, set()):
                return False
            self.pending.pop()
        if self.cfg.pruning == "hall+degree" and len(self.seq) < self.L:
            remaining = self.n_windows - len(self.window_colors)
            unplaced = set(self.pool) - self.used
            future = {c for c in self.colors if self.cover[c] & unplaced}
            if len(future) < remaining:
                return False
            reach = set(future)
            for cols in self.window_colors.values():
                reach.update(cols)
            if len(reach) < self.n_windows:
                return False
        return True

    # -- windows
    def _new_windows(self, pos: int) -> list[int]:
        """Window starts completed by placing position ``pos``."""
        k, L = self.k, self.L
        out = []
        if pos >= k - 1:
            out.append(pos - k + 1)
        if self.cyclic and pos == L - 1:
            out.extend(range(L - k + 1, L))
        return out

    def _window_points(self, w: int) -> tuple:
        L = self.L
        return tuple(sorted(self.seq[(w + r) % L] for r in range(self.k)))

    def _place(self, v: int) -> list[int]:
        self.seq.append(v)
        self.used.add(v)
        added = []
        for w in self._new_windows(len(self.seq) - 1):
            self.window_colors[w] = self.admissible.get(self._window_points(w), [])
            added.append(w)
            self.pending.append(w)
        return added

    def _unplace(self, added: list[int]) -> None:
        for w in added:
            self._drop(w)
        v = self.seq.pop()
        self.used.discard(v)

    def _tick(self) -> None:
        self.nodes += 1
        if self.cfg.node_limit is not None and self.nodes > self.cfg.node_limit:
            raise _Limit()
        if self.cfg.time_limit is not None and self.nodes % 256 == 0:
            if (time.perf_counter() - self.start) * 1000 > self.cfg.time_limit:
                raise _Limit()

    def _feasible_now(self, force: bool) -> bool:
        if self.cfg.pruning == "none" and not force:
            return True
        self.depth_since_check += 1
        if not force and self.depth_since_check < self.cfg.check_every:
            return True
        self.depth_since_check = 0
        return self._check()

    def _candidates(self) -> list[int]:
        pos = len(self.seq)
        free_end = self.L - len(self.suffix)
        if pos >= free_end:
            v = self.suffix[pos - free_end]
            return [] if v in self.used else [v]
        reserved = set(self.suffix)
        cands = [v for v in self.pool if v not in self.used and v not in reserved]
        if self.rng is not None:
            self.rng.shuffle(cands)
        if self.break_reflection and pos == self.L - 1 and len(self.seq) > 1:
            cands = [v for v in cands if v > self.seq[1]]
        return cands

    def _dfs(self) -> bool:
        if len(self.seq) == self.L:
            return self._feasible_now(force=True)
        for v in self._candidates():
            self._tick()
            added = self._place(v)
            if self._feasible_now(force=len(self.seq) == self.L) and self._dfs():
                return True
            self._unplace(added)
        return False

    def run(self) -> SearchResult:
        self.n_windows = self.L if self.cyclic else max(0, self.L - self.k + 1)
        status = "absent"
        walk = None
        if self.n_windows != len(self.colors) or self.L < self.k:
            return self._result("absent" if self.cfg.exact else "exhausted", None)
        try:
            for v in self.prefix:
                if v in self.used:
                    return self._result("absent" if self.cfg.exact else "exhausted", None)
                self._place(v)
            if self._feasible_now(force=True) and self._dfs():
                status = "found"
                cols = [self.assigned[w] for w in range(self.n_windows)]
                walk = SeqWalk(tuple(cols), tuple(self.seq), self.cyclic)
        except _Limit:
            return self._result("exhausted", None)
        if status == "absent" and not self.cfg.exact:
            status = "exhausted"
        return self._result(status, walk)

    def _result(self, status, walk) -> SearchResult:
        millis = int((time.perf_counter() - self.start) * 1000)
        return SearchResult(status, walk, self.nodes, millis, {"pruning": self.cfg.pruning})


def find_rainbow_hamilton(system: GraphSystem | OneKGraph, cfg: SearchConfig | None = None) -> SearchResult:
    """Search cyclic point orders starting at point 0 for a rainbow tight Hamilton cycle."""
    cfg = cfg or SearchConfig()
    H = system_to_onek(system) if isinstance(system, GraphSystem) else system
    if H.n < H.k + 1:
        raise ValueError(f"need n >= k+1, got n={H.n}, k={H.k}")
    search = _RainbowSearch(H, range(H.n), range(H.color_count), True, [0], [], cfg, True)
    return search.run()


def verify_hamilton(system: GraphSystem | OneKGraph, cycle: SeqWalk) -> bool:
    """Independent replay: n cyclic windows, each an edge of its color, colors distinct, points a permutation."""
    H = system_to_onek(system) if isinstance(system, GraphSystem) else system
    n, k = H.n, H.k
    if not cycle.closed or len(cycle.points) != n or len(cycle.colors) != n:
        return False
    if sorted(cycle.points) != list(range(n)) or len(set(cycle.colors)) != n:
        return False
    for i in range(n):
        c = cycle.colors[i]
        if not 0 <= c < H.color_count:
            return False
        pts = [cycle.points[(i + r) % n] for r in range(k)]
        if not H.has(c, pts):
            return False
    return True


# ---------------------------------------------------------------- absorbing

@dataclass(frozen=True)
class AbsorptionQuery:
    path: SeqWalk
    S: tuple = ()
    O: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(sorted(int(v) for v in self.S)))
        object.__setattr__(self, "O", tuple(sorted(int(c) for c in self.O)))

    def problems(self, k: int) -> list[str]:
        out = []
        if not is_path(self.path):
            out.append("P is not a sequentially path")
        if len(self.path.points) < k - 1:
            out.append("P is shorter than k-1 points")
        if set(self.S) & set(self.path.points):
            out.append("S meets I(P)")
        if set(self.O) & set(self.path.colors):
            out.append("O meets C(P)")
        if len(self.S) % k:
            out.append("|S| is not divisible by k")
        if len(self.O) != len(self.S):
            out.append("|O| differs from |S|")
        return out


def check_absorbing_path(G: OneKGraph, q: AbsorptionQuery, budget: SearchConfig | None = None) -> SearchResult:
    """Look for P' with P's end (k-1)-tuples, I(P') = I(P) + S and C(P') = C(P) + O."""
    budget = budget or SearchConfig()
    k = G.k
    bad = q.problems(k)
    if bad:
        raise ValueError("; ".join(bad))
    P = q.path
    if not validate(G, P):
        raise ValueError("P is not a path of G")
    if not q.S:
        return SearchResult("found", P, 0, 0)
    s = k - 1
    prefix, suffix = P.points[:s], P.points[len(P.points) - s:]
    pool = sorted(set(P.points) | set(q.S))
    colors = sorted(set(P.colors) | set(q.O))
    search = _RainbowSearch(G, pool, colors, False, prefix, suffix, budget, False)
    return search.run()


@dataclass(frozen=True)
class AbsorbingGadget:
    """The named tuples of a gadget; primed parts carry a trailing 2."""

    A: tuple
    B: tuple
    E: tuple
    C: tuple
    Cs: tuple  # k color tuples C_1..C_k
    P: tuple  # k point tuples
    Q: tuple
    A2: tuple
    B2: tuple
    E2: tuple
    C2: tuple
    Cs2: tuple
    P2: tuple
    Q2: tuple

    def point_parts(self) -> list[tuple]:
        return [self.A, self.B, self.E, *self.P, *self.Q, self.A2, self.B2, self.E2, *self.P2, *self.Q2]

    def color_parts(self) -> list[tuple]:
        return [self.C, *self.Cs, self.C2, *self.Cs2]

    def to_json(self) -> dict:
        return {name: _listify(getattr(self, name)) for name in self.__dataclass_fields__}

    @classmethod
    def from_json(cls, data) -> "AbsorbingGadget":
        return cls(**{name: _tuplify(data[name]) for name in cls.__dataclass_fields__})


def _listify(x):
    return [_listify(v) for v in x] if isinstance(x, (tuple, list)) else x


def _tuplify(x):
    return tuple(_tuplify(v) for v in x) if isinstance(x, (tuple, list)) else x


@dataclass
class GadgetReport:
    clauses: dict  # "1".."5" -> {"holds": bool, "detail": str}
    color_convention: str = "set-level"

    @property
    def holds(self) -> bool:
        return all(c["holds"] for c in self.clauses.values())

    def to_json(self) -> dict:
        return {"holds": self.holds, "clauses": self.clauses, "colorConvention": self.color_convention}


def _is_path(G: OneKGraph, colors: Sequence[int], points: Sequence[int]) -> bool:
    W = SeqWalk(tuple(colors), tuple(points))
    if len(W.colors) != W.expected_colors(G.k):
        return False
    return is_path(W) and bool(validate(G, W))


def _path_some_order(G: OneKGraph, colors: Iterable[int], points: Sequence[int]) -> bool:
    """Some bijection of the color set onto the windows makes a path (bipartite matching)."""
    k = G.k
    cols = list(colors)
    wins = [tuple(points[i:i + k]) for i in range(len(points) - k + 1)]
    if len(wins) != len(cols) or len(set(cols)) != len(cols) or len(set(points)) != len(points):
        return False
    owner: dict[int, int] = {}

    def augment(w: int, seen: set) -> bool:
        for c in cols:
            if c in seen or not G.has(c, wins[w]):
                continue
            seen.add(c)
            if c not in owner or augment(owner[c], seen):
                owner[c] = w
                return True
        return False

    return all(augment(w, set()) for w in range(len(wins)))


def verify_absorbing_gadget(G: OneKGraph, F: AbsorbingGadget, T: Sequence[int], O: Sequence[int]) -> GadgetReport:
    """Check clauses (1)-(5) of an absorbing gadget for (T, O).

    C_i carries k colors, one per window of the (2k-1)-point path it
    colors.  The recolored path of clause (4) is checked at set level: some
    assignment of {o_i} + C_i - {c_i1} to the windows must work.
    """
    k = G.k
    T, O = tuple(T), tuple(O)
    clauses = {}

    def put(name, ok, detail=""):
        clauses[name] = {"holds": bool(ok), "detail": detail}

    parts = F.point_parts()
    flat = [v for p in parts for v in p]
    cparts = F.color_parts()
    cflat = [c for p in cparts for c in p]
    if len(set(flat)) != len(flat) or set(flat) & set(T):
        put("1", False, "point tuples overlap each other or T")
    elif len(set(cflat)) != len(cflat) or set(cflat) & set(O):
        put("1", False, "color tuples overlap each other or O")
    else:
        put("1", True)

    shapes = (len(T) == k and len(O) == k and len(F.Cs) == k and len(F.Cs2) == k
              and len(F.P) == k and len(F.Q) == k and len(F.P2) == k and len(F.Q2) == k
              and all(len(c) == k for c in F.Cs + F.Cs2))
    put("2", shapes, "" if shapes else "C_i, C_i' must be k tuples of k colors; T, O of size k")
    if not shapes:
        for name in ("3", "4", "5"):
            put(name, False, "skipped: malformed shapes")
        return GadgetReport(clauses)

    three = (all(len(x) == k for x in (F.A, F.B, F.E, F.A2, F.B2, F.E2))
             and len(F.C) == k + 1 and len(F.C2) == k + 1)
    firsts = tuple(c[0] for c in F.Cs)
    if not three:
        put("3", False, "A, B, E and primes need k points; C, C' need k+1 colors")
    elif not _is_path(G, F.C, F.A + F.E):
        put("3", False, "(C, AE) is not a path")
    elif not _is_path(G, F.C2, F.A2 + F.E2):
        put("3", False, "(C', A'E') is not a path")
    elif not _is_path(G, F.C2 + firsts, F.A2 + F.B2 + F.E2):
        put("3", False, "(C'(c_11..c_k1), A'B'E') is not a path")
    else:
        put("3", True)

    ok4, detail4 = True, ""
    for i in range(k):
        pts = F.P[i] + (F.B[i],) + F.Q[i]
        if len(F.P[i]) != k - 1 or len(F.Q[i]) != k - 1:
            ok4, detail4 = False, f"P_{i + 1}, Q_{i + 1} need k-1 points"
            break
        if not _is_path(G, F.Cs[i], pts):
            ok4, detail4 = False, f"(C_{i + 1}, P_{i + 1} b_{i + 1} Q_{i + 1}) is not a path"
            break
        swapped = (O[i],) + tuple(F.Cs[i][1:])
        if not _path_some_order(G, swapped, pts):
            ok4, detail4 = False, f"recolored path {i + 1} with o_{i + 1} is not a path"
            break
    put("4", ok4, detail4)

    ok5, detail5 = True, ""
    for i in range(k):
        if len(F.P2[i]) != k - 1 or len(F.Q2[i]) != k - 1:
            ok5, detail5 = False, f"P'_{i + 1}, Q'_{i + 1} need k-1 points"
            break
        if not _is_path(G, F.Cs2[i], F.P2[i] + (F.B2[i],) + F.Q2[i]):
            ok5, detail5 = False, f"(C'_{i + 1}, P'_{i + 1} b'_{i + 1} Q'_{i + 1}) is not a path"
            break
        if not _is_path(G, F.Cs2[i], F.P2[i] + (T[i],) + F.Q2[i]):
            ok5, detail5 = False, f"(C'_{i + 1}, P'_{i + 1} t_{i + 1} Q'_{i + 1}) is not a path"
            break
    put("5", ok5, detail5)
    return GadgetReport(clauses)


# -------------------------------------------------------------------- probe

@dataclass(frozen=True)
class ProbeRow:
    level: float
    trials: int
    found: int
    exhausted: int
    seeds: tuple

    @property
    def fraction(self) -> float:
        return self.found / self.trials if self.trials else 0.0

    def to_json(self) -> dict:
        return {"level": self.level, "trials": self.trials, "found": self.found, "exhausted": self.exhausted,
                "fraction": self.fraction, "seeds": list(self.seeds)}


def _probe_one(args):
    from .instances import random_system

    k, n, level, trial_seed, cfg = args
    system = random_system(n, k, level, trial_seed)
    res = find_rainbow_hamilton(system, cfg)
    if res.status == "found" and not verify_hamilton(system, res.walk):
        raise AssertionError(f"unverifiable cycle for seed {trial_seed}")
    return res.status


def threshold_probe(k: int, n: int, grid: Sequence[float], trials: int, seed: int = 0,
                    cfg: SearchConfig | None = None, jobs: int = 1) -> list[ProbeRow]:
    """Fraction of random systems with a rainbow Hamilton cycle at each degree level."""
    cfg = cfg or SearchConfig()
    rows = []
    tasks = []
    for li, level in enumerate(grid):
        seeds = tuple(seed * 1_000_003 + li * 10_007 + t for t in range(trials))
        tasks.append((level, seeds))
    work = [(k, n, level, s, cfg) for level, seeds in tasks for s in seeds]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            statuses = list(pool.map(_probe_one, work))
    else:
        statuses = [_probe_one(w) for w in work]
    idx = 0
    for level, seeds in tasks:
        chunk = statuses[idx:idx + len(seeds)]
        idx += len(seeds)
        rows.append(ProbeRow(level, len(seeds), chunk.count("found"), chunk.count("exhausted"), seeds))
    return rows
