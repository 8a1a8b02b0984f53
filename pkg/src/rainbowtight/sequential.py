"""Sequentially walks, paths and cycles in (1,k)-graphs.

A walk is an ordered point list plus an ordered color list.  Its i-th
window is the i-th run of k consecutive points, paired with the i-th color.
Length always means the number of points.  Closed walks do not repeat the
wrap-around points; their windows are read cyclically, so a closed walk
carries exactly as many colors as points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import OneKGraph


@dataclass(frozen=True)
class SeqWalk:
    colors: tuple = ()
    points: tuple = ()
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        object.__setattr__(self, "points", tuple(int(v) for v in self.points))

    def __len__(self) -> int:
        return len(self.points)

    def expected_colors(self, k: int) -> int:
        if self.closed:
            return len(self.points)
        return max(0, len(self.points) - k + 1)

    def check_shape(self, k: int) -> None:
        want = self.expected_colors(k)
        if len(self.colors) != want:
            raise ValueError(f"walk with {len(self.points)} points needs {want} colors for k={k}, "
                             f"got {len(self.colors)}")

    def windows(self, k: int) -> Iterator[tuple[int, tuple]]:
        """Yield ``(color, ordered k-tuple)`` for every window."""
        self.check_shape(k)
        pts = self.points
        L = len(pts)
        if self.closed:
            for i in range(L):
                yield self.colors[i], tuple(pts[(i + r) % L] for r in range(k))
        else:
            for i in range(len(self.colors)):
                yield self.colors[i], pts[i:i + k]

    def first_window(self, k: int) -> tuple:
        return next(self.windows(k))

    def last_window(self, k: int) -> tuple:
        *_, last = self.windows(k)
        return last

    def to_json(self) -> dict:
        return {"colors": list(self.colors), "points": list(self.points), "closed": self.closed}

    @classmethod
    def from_json(cls, data) -> "SeqWalk":
        if not isinstance(data, dict) or "points" not in data or "colors" not in data:
            raise ValueError("walk: expected an object with 'colors' and 'points'")
        return cls(tuple(data["colors"]), tuple(data["points"]), bool(data.get("closed", False)))


@dataclass(frozen=True)
class WalkCheck:
    valid: bool
    failed_window: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        return {"valid": self.valid, "failedWindow": self.failed_window, "reason": self.reason}


def validate(G: OneKGraph, W: SeqWalk) -> WalkCheck:
    """Check every window against G; reports the first failing window."""
    for i, (c, win) in enumerate(W.windows(G.k)):
        if len(set(win)) != len(win):
            return WalkCheck(False, i, f"window {i} repeats a point")
        if not G.has(c, win):
            return WalkCheck(False, i, f"window {i} ({c}; {list(win)}) is not an edge")
    return WalkCheck(True)


def is_rainbow(W: SeqWalk) -> bool:
    return len(set(W.colors)) == len(W.colors)


def is_path(W: SeqWalk) -> bool:
    """Points and colors pairwise distinct and the walk is open."""
    return not W.closed and len(set(W.points)) == len(W.points) and is_rainbow(W)


def concatenate(W1: SeqWalk, W2: SeqWalk, k: int) -> SeqWalk:
    """Glue W2 onto W1 along the shared (k-1)-tuple."""
    if W1.closed or W2.closed:
        raise ValueError("only open walks can be concatenated")
    W1.check_shape(k)
    W2.check_shape(k)
    s = k - 1
    if len(W1.points) < s or len(W2.points) < s:
        raise ValueError(f"both walks need at least {s} points")
    tail = W1.points[len(W1.points) - s:]
    if tail != W2.points[:s]:
        raise ValueError(f"terminal tuple {list(tail)} does not match initial tuple {list(W2.points[:s])}")
    return SeqWalk(W1.colors + W2.colors, W1.points + W2.points[s:])


def walk_from_windows(windows: Sequence[tuple[int, tuple]]) -> SeqWalk:
    if not windows:
        return SeqWalk()
    pts = list(windows[0][1]) + [w[1][-1] for w in windows[1:]]
    return SeqWalk(tuple(c for c, _ in windows), tuple(pts))


def walk_length_bound(k: int, t: int) -> int:
    return k * t ** (k + 1)


def shorten_walk(H: OneKGraph, W: SeqWalk) -> SeqWalk:
    """Remove detours between repeated windows whose positions agree mod k.

    A window is the color together with the ordered k-tuple of points.
    Windows are scanned left to right; whenever the current window already
    occurs at an earlier kept position of the same residue, everything kept
    after that occurrence is cut.  Matching on the color as well keeps the
    first and last (1,k)-tuples exactly.  The result drops a multiple of k
    points and holds each window at most k times, hence at most
    k * t**(k+1) points.
    """
    if W.closed:
        raise ValueError("shorten_walk expects an open walk")
    check = validate(H, W)
    if not check:
        raise ValueError(f"invalid walk: {check.reason}")
    k = H.k
    if len(W.points) <= k:
        return W
    out: list[tuple[int, tuple]] = []
    seen: dict[tuple, int] = {}
    for win in W.windows(k):
        q = len(out)
        key = (win, q % k)
        p = seen.get(key)
        if p is None:
            seen[key] = q
            out.append(win)
            continue
        for r in range(p + 1, q):
            del seen[(out[r], r % k)]
        del out[p + 1:]
    return walk_from_windows(out)


def cyclic_shifts(tup: Sequence) -> list[tuple]:
    tup = tuple(tup)
    if not tup:
        raise ValueError("cyclic shifts of an empty tuple are undefined")
    return [tup[i:] + tup[:i] for i in range(len(tup))]


def same_up_to_rotation(W1: SeqWalk, W2: SeqWalk) -> bool:
    """Closed-walk equality modulo a common rotation of points and colors."""
    if not (W1.closed and W2.closed) or len(W1.points) != len(W2.points):
        return False
    if not W1.points:
        return True
    L = len(W1.points)
    return any(W1.points[i:] + W1.points[:i] == W2.points and W1.colors[i:] + W1.colors[:i] == W2.colors
               for i in range(L))


def single_color_walk(color: int, points: Sequence[int], k: int, closed: bool = False) -> SeqWalk:
    """Walk using one color for every window."""
    count = len(points) if closed else max(0, len(points) - k + 1)
    return SeqWalk((color,) * count, tuple(points), closed)
