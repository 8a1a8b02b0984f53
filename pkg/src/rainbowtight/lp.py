"""Linear programs: maximize c.x subject to row constraints and x >= 0.

``solve_lp`` has two backends.  The exact one is a two-phase dense tableau
simplex over ``Fraction``; it uses the largest-coefficient entering rule and
falls back to Bland's rule after a run of degenerate pivots, which rules out
cycling.  The float one hands the problem to scipy's HiGHS interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

FLOAT_TOL = 1e-9
_DEGENERATE_RUN = 50


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | float | None
    x: tuple
    exact: bool

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows  # list of lists (length ncols)
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, j: int, cost: list) -> None:
        row = self.rows[r]
        p = row[j]
        if p != 1:
            inv = 1 / p
            for idx in range(self.ncols):
                if row[idx]:
                    row[idx] *= inv
            self.rhs[r] *= inv
        nz = [idx for idx in range(self.ncols) if row[idx]]
        rr = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[j]
            if not f:
                continue
            for idx in nz:
                other[idx] -= f * row[idx]
            self.rhs[i] -= f * rr
        f = cost[j]
        if f:
            for idx in nz:
                cost[idx] -= f * row[idx]
            cost[-1] -= f * rr
        self.basis[r] = j

    def run(self, cost: list, allowed: list[bool]) -> str:
        """Maximize; ``cost`` holds reduced costs and -objective in its last slot."""
        degenerate = 0
        while True:
            bland = degenerate >= _DEGENERATE_RUN
            enter = -1
            best = 0
            for j in range(self.ncols):
                if allowed[j] and cost[j] > 0:
                    if bland:
                        enter = j
                        break
                    if cost[j] > best:
                        best, enter = cost[j], j
            if enter < 0:
                return "optimal"
            leave = -1
            ratio = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    q = self.rhs[i] / a
                    if ratio is None or q < ratio or (q == ratio and self.basis[i] < self.basis[leave]):
                        ratio, leave = q, i
            if leave < 0:
                return "unbounded"
            degenerate = degenerate + 1 if ratio == 0 else 0
            self.pivot(leave, enter, cost)


def _exact(c, A_ub, b_ub, A_eq, b_eq) -> LPResult:
    n = len(c)
    rows_in = []  # (coeffs, rhs, kind) with kind in {"le", "eq"}
    for a, b in zip(A_ub, b_ub):
        rows_in.append(([Fraction(v) for v in a], Fraction(b), "le"))
    for a, b in zip(A_eq, b_eq):
        rows_in.append(([Fraction(v) for v in a], Fraction(b), "eq"))
    # column layout: originals | one slack per le row | one artificial per row needing it
    n_slack = sum(1 for *_, kind in rows_in if kind == "le")
    needs_art = []
    for coeffs, b, kind in rows_in:
        needs_art.append(kind == "eq" or b < 0)
    n_art = sum(needs_art)
    ncols = n + n_slack + n_art
    rows, rhs, basis = [], [], []
    s_col, a_col = n, n + n_slack
    for (coeffs, b, kind), art in zip(rows_in, needs_art):
        row = coeffs + [Fraction(0)] * (ncols - n)
        slack = None
        if kind == "le":
            row[s_col] = Fraction(1)
            slack = s_col
            s_col += 1
        if b < 0:
            row = [-v for v in row]
            b = -b
        if art:
            row[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        else:
            basis.append(slack)
        rows.append(row)
        rhs.append(b)
    tab = _Tableau(rows, rhs, basis, ncols)
    art_cols = set(range(n + n_slack, ncols))

    if n_art:
        # phase 1: maximize -(sum of artificials)
        cost = [Fraction(0)] * (ncols + 1)
        for j in art_cols:
            cost[j] = Fraction(-1)
        for i, bj in enumerate(tab.basis):
            if bj in art_cols:
                for idx in range(ncols):
                    if tab.rows[i][idx]:
                        cost[idx] += tab.rows[i][idx]
                cost[-1] += tab.rhs[i]
        tab.run(cost, [True] * ncols)
        if cost[-1] != 0:
            return LPResult("infeasible", None, (), True)
        # drive zero-valued artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(len(tab.rows)):
            if tab.basis[i] in art_cols:
                j = next((j for j in range(n + n_slack) if tab.rows[i][j]), None)
                if j is None:
                    continue
                tab.pivot(i, j, [Fraction(0)] * (ncols + 1))
            keep.append(i)
        tab.rows = [tab.rows[i] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]

    cost = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        cost[j] = Fraction(c[j])
    for i, bj in enumerate(tab.basis):
        cb = cost[bj]
        if cb:
            for idx in range(ncols):
                if tab.rows[i][idx]:
                    cost[idx] -= cb * tab.rows[i][idx]
            cost[-1] -= cb * tab.rhs[i]
    allowed = [j not in art_cols for j in range(ncols)]
    status = tab.run(cost, allowed)
    if status == "unbounded":
        return LPResult("unbounded", None, (), True)
    x = [Fraction(0)] * n
    for i, bj in enumerate(tab.basis):
        if bj < n:
            x[bj] = tab.rhs[i]
    value = sum((Fraction(c[j]) * x[j] for j in range(n)), Fraction(0))
    return LPResult("optimal", value, tuple(x), True)


def _float(c, A_ub, b_ub, A_eq, b_eq) -> LPResult:
    import numpy as np
    from scipy.optimize import linprog

    n = len(c)
    kw = {}
    if A_ub:
        kw["A_ub"] = np.array([[float(v) for v in row] for row in A_ub])
        kw["b_ub"] = np.array([float(v) for v in b_ub])
    if A_eq:
        kw["A_eq"] = np.array([[float(v) for v in row] for row in A_eq])
        kw["b_eq"] = np.array([float(v) for v in b_eq])
    res = linprog(-np.array([float(v) for v in c]), bounds=[(0, None)] * n, method="highs", **kw)
    if res.status == 2:
        return LPResult("infeasible", None, (), False)
    if res.status == 3:
        return LPResult("unbounded", None, (), False)
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    x = tuple(0.0 if abs(v) < FLOAT_TOL else float(v) for v in res.x)
    return LPResult("optimal", float(-res.fun), x, False)


def solve_lp(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = (), backend: str = "exact") -> LPResult:
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    A_ub, b_ub, A_eq, b_eq = list(A_ub), list(b_ub), list(A_eq), list(b_eq)
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")
    for row in A_ub + A_eq:
        if len(row) != len(c):
            raise ValueError("constraint row length differs from objective length")
    if backend == "exact":
        return _exact(c, A_ub, b_ub, A_eq, b_eq)
    if backend == "float":
        return _float(c, A_ub, b_ub, A_eq, b_eq)
    raise ValueError(f"unknown LP backend {backend!r}")
