"""Small linear programs: an exact rational simplex and a float fallback.

Problems are stated as

    maximize  c . x   subject to  A_ub x <= b_ub,  A_eq x == b_eq,  x >= 0

Free variables are the caller's business (split them as x+ - x-).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None
    value: object | None


class _Tableau:
    """Dense tableau; the last column is the right-hand side, the last row
    the reduced objective (we minimize ``-c . x`` internally)."""

    def __init__(self, rows, rhs, basis):
        self.t = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)

    def pivot(self, r, c):
        t = self.t
        p = t[r][c]
        t[r] = [v / p for v in t[r]]
        for i in range(len(t)):
            if i != r and t[i][c] != 0:
                f = t[i][c]
                ti, tr = t[i], t[r]
                t[i] = [a - f * b for a, b in zip(ti, tr)]
        self.basis[r] = c

    def run(self, obj, allowed):
        """Minimize ``obj . x`` (Bland's rule).  ``obj`` is a cost row over
        the columns; returns "optimal" or "unbounded"."""
        t = self.t
        ncol = len(t[0]) - 1
        # reduced costs
        z = list(obj) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = z[b]
            if cb != 0:
                z = [zv - cb * tv for zv, tv in zip(z, t[i])]
        while True:
            enter = next((j for j in range(ncol) if allowed[j] and z[j] < 0), None)
            if enter is None:
                return "optimal"
            best = None
            for i in range(len(t)):
                a = t[i][enter]
                if a > 0:
                    ratio = t[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            r = best[1]
            self.pivot(r, enter)
            f = z[enter]
            z = [zv - f * tv for zv, tv in zip(z, t[r])]


def linprog_exact(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Exact two-phase simplex over :class:`fractions.Fraction`."""
    F = Fraction
    c = [F(v) for v in c]
    n = len(c)
    rows, rhs, kinds = [], [], []
    for a, b in zip(A_ub, b_ub):
        rows.append([F(v) for v in a])
        rhs.append(F(b))
        kinds.append("ub")
    for a, b in zip(A_eq, b_eq):
        rows.append([F(v) for v in a])
        rhs.append(F(b))
        kinds.append("eq")
    n_slack = sum(k == "ub" for k in kinds)
    # <= rows with b >= 0 start from their slack; the rest need an artificial
    needs_art = [k == "eq" or b < 0 for k, b in zip(kinds, rhs)]
    n_art = sum(needs_art)
    # columns: x (n) | slacks | artificials
    total = n + n_slack + n_art
    full, basis = [], []
    s = a_i = 0
    for i, (row, kind) in enumerate(zip(rows, kinds)):
        sl = [F(0)] * n_slack
        slack_col = None
        if kind == "ub":
            sl[s] = F(1)
            slack_col = n + s
            s += 1
        sign = -1 if rhs[i] < 0 else 1
        r = [sign * v for v in row] + [sign * v for v in sl]
        rhs[i] = sign * rhs[i]
        art = [F(0)] * n_art
        if needs_art[i]:
            art[a_i] = F(1)
            basis.append(n + n_slack + a_i)
            a_i += 1
        else:
            basis.append(slack_col)
        full.append(r + art)
    tab = _Tableau(full, rhs, basis)
    # phase I: minimize the sum of artificials
    if n_art:
        obj1 = [F(0)] * (n + n_slack) + [F(1)] * n_art
        tab.run(obj1, [True] * total)
    if sum(tab.t[i][-1] for i, b in enumerate(tab.basis) if b >= n + n_slack) != 0:
        return LPResult("infeasible", None, None)
    # drive remaining (zero-level) artificials out of the basis
    for i, b in enumerate(list(tab.basis)):
        if b >= n + n_slack:
            j = next((j for j in range(n + n_slack) if tab.t[i][j] != 0), None)
            if j is not None:
                tab.pivot(i, j)
    allowed = [True] * (n + n_slack) + [False] * n_art
    obj2 = [-v for v in c] + [F(0)] * (n_slack + n_art)
    status = tab.run(obj2, allowed)
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    x = [F(0)] * total
    for i, b in enumerate(tab.basis):
        x[b] = tab.t[i][-1]
    x = x[:n]
    return LPResult("optimal", x, sum(ci * xi for ci, xi in zip(c, x)))


def linprog_float(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    from scipy.optimize import linprog

    kw = {}
    if len(A_ub):
        kw["A_ub"] = np.asarray(A_ub, float)
        kw["b_ub"] = np.asarray(b_ub, float)
    if len(A_eq):
        kw["A_eq"] = np.asarray(A_eq, float)
        kw["b_eq"] = np.asarray(b_eq, float)
    res = linprog(-np.asarray(c, float), bounds=(0, None), method="highs", **kw)
    if res.status == 2:
        return LPResult("infeasible", None, None)
    if res.status == 3:
        return LPResult("unbounded", None, None)
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    return LPResult("optimal", list(res.x), -res.fun)


def linprog(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), exact=True) -> LPResult:
    if exact:
        return linprog_exact(c, A_ub, b_ub, A_eq, b_eq)
    return linprog_float(c, A_ub, b_ub, A_eq, b_eq)
