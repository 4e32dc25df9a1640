"""Exact two-phase simplex over Fractions, sized for the small chain systems used here."""
from __future__ import annotations

from fractions import Fraction


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


def maximize(c, rows, rhs):
    """Maximise c.x subject to rows[i].x <= rhs[i] and x >= 0.  Returns (value, x)."""
    n = len(c)
    m = len(rows)
    # tableau columns: x (n), slack (m), artificial (m), rhs
    width = n + 2 * m
    table = []
    basis = []
    artificial = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        line = [Fraction(v) for v in row] + [Fraction(0)] * (2 * m) + [Fraction(b)]
        line[n + i] = Fraction(1)
        if line[-1] < 0:
            line = [-v for v in line]
            line[n + m + i] = Fraction(1)
            basis.append(n + m + i)
            artificial.append(n + m + i)
        else:
            basis.append(n + i)
        table.append(line)

    if artificial:
        phase1 = [Fraction(0)] * width
        for a in artificial:
            phase1[a] = Fraction(-1)
        _optimize(table, basis, phase1, width)
        if _objective(table, basis, phase1) < 0:
            raise LPInfeasible("no feasible point")
        for i, bvar in enumerate(basis):
            if bvar in artificial:
                for col in range(n + m):
                    if table[i][col] != 0:
                        _pivot(table, basis, i, col)
                        break
    allowed = n + m
    obj = [Fraction(v) for v in c] + [Fraction(0)] * (2 * m)
    _optimize(table, basis, obj, allowed)
    x = [Fraction(0)] * n
    for i, bvar in enumerate(basis):
        if bvar < n:
            x[bvar] = table[i][-1]
    return sum(ci * xi for ci, xi in zip(c, x)), x


def _objective(table, basis, obj):
    return sum(obj[b] * table[i][-1] for i, b in enumerate(basis))


def _pivot(table, basis, r, col):
    pivot = table[r][col]
    table[r] = [v / pivot for v in table[r]]
    for i, line in enumerate(table):
        if i != r and line[col] != 0:
            f = line[col]
            table[i] = [a - f * b for a, b in zip(line, table[r])]
    basis[r] = col


def _optimize(table, basis, obj, allowed):
    # Bland's rule keeps this terminating on degenerate chains
    while True:
        entering = None
        for col in range(allowed):
            if col in basis:
                continue
            reduced = obj[col] - sum(obj[b] * table[i][col] for i, b in enumerate(basis))
            if reduced > 0:
                entering = col
                break
        if entering is None:
            return
        best = None
        for i, line in enumerate(table):
            if line[entering] > 0:
                ratio = line[-1] / line[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise LPUnbounded("objective is unbounded")
        _pivot(table, basis, best[1], entering)
