import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arborhyp.lp import LPInfeasible, LPUnbounded, maximize


def _solve_square(rows, rhs):
    """Gauss-Jordan over Fractions; None when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def vertex_max(c, rows, rhs):
    """Best objective over all basic feasible points, by enumerating every active set."""
    n = len(c)
    all_rows = [list(r) for r in rows] + [[-Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    all_rhs = list(rhs) + [Fraction(0)] * n
    best = None
    for active in itertools.combinations(range(len(all_rows)), n):
        x = _solve_square([all_rows[i] for i in active], [all_rhs[i] for i in active])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(r, x)) <= b for r, b in zip(all_rows, all_rhs)):
            val = sum(a * v for a, v in zip(c, x))
            best = val if best is None else max(best, val)
    return best


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_simplex_matches_vertex_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    k = rng.randint(1, 4)
    rows = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(k)]
    rhs = [Fraction(rng.randint(-3, 6)) for _ in range(k)]
    # a box keeps every instance bounded
    for i in range(n):
        rows.append([Fraction(int(i == j)) for j in range(n)])
        rhs.append(Fraction(rng.randint(1, 5)))
    c = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
    want = vertex_max(c, rows, rhs)
    if want is None:
        with pytest.raises(LPInfeasible):
            maximize(c, rows, rhs)
        return
    value, x = maximize(c, rows, rhs)
    assert value == want
    assert all(v >= 0 for v in x)
    assert all(sum(a * v for a, v in zip(r, x)) <= b for r, b in zip(rows, rhs))
    assert sum(a * v for a, v in zip(c, x)) == value


def test_unbounded():
    with pytest.raises(LPUnbounded):
        maximize([Fraction(1)], [[Fraction(-1)]], [Fraction(1)])


def test_infeasible():
    with pytest.raises(LPInfeasible):
        maximize([Fraction(1)], [[Fraction(1)]], [Fraction(-1)])


def test_textbook_instance():
    value, x = maximize([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert value == 36 and list(x) == [2, 6]
