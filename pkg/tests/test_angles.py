import json
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings, strategies as st

from arborhyp.angles import (
    _twobridge_w,
    RangeViolation,
    assign,
    assignment_from_json,
    band_edge_angles,
    certificate,
    choose_block_angles,
    conditions_hold,
    construct_w_product,
    construct_w_tangle,
    girth_check,
    hinge_indices,
    layer_angles,
    reparametrize,
    solve_w_feasibility,
    tangle_feasible,
    tangle_v,
)
from arborhyp.decomposer import SlopeTooClose, assemble
from arborhyp.errors import Infeasible
from arborhyp.farey import INF, Slope, farey_path, slope_reduce
from arborhyp.presentation import montesinos, pretzel, twobridge
from arborhyp.verifier import verify

F = Fraction
EPS = F(1, 16)


def test_band_angles_uniform_thirds():
    band = band_edge_angles([F(1, 3)] * 3, [F(1, 3)] * 3)
    assert band.c == [F(1, 3)] * 3


def test_band_angles_half_gives_zero_bending():
    band = band_edge_angles([F(1, 2)] * 2, [F(1, 2)] * 2)
    assert band.c == [0, 0]


@pytest.mark.parametrize("a,b", [([1, F(1, 3)], [0, F(1, 3)]), ([0, F(1, 3)], [0, F(1, 3)]), ([F(2, 3)], [F(1, 2)])])
def test_band_angles_out_of_range(a, b):
    with pytest.raises(RangeViolation):
        band_edge_angles(a, b)


def test_vertex_sums_are_two_pi():
    rng = random.Random(3)
    for _ in range(50):
        d = rng.randint(1, 6)
        a = [F(rng.randint(0, 11), 24) for _ in range(d)]
        b = [F(rng.randint(1, 11), 24) for _ in range(d)]
        band = band_edge_angles(a, b)
        for j in range(d):
            # exterior angles meeting at the vertex between bands j and j+1
            nxt = (j + 1) % d
            assert 2 * band.c[j] + a[j] + b[j] + a[nxt] + b[nxt] == 2


def test_girth():
    e = EPS
    assert girth_check([e, F(1, 2), F(1, 3) + e], [e, F(1, 2), F(1, 3) + e], 3)
    assert not girth_check([F(1, 2)] * 3, [F(1, 2)] * 3, 3)
    assert not girth_check([F(1, 2)] * 4, [F(1, 2)] * 4, 4)


def test_layer_table_columns():
    e = EPS
    assert layer_angles(e, 2 * e, e, "LL") == (e, e, 1 - 2 * e)
    assert layer_angles(2 * e, 3 * e, 4 * e, "LR") == (e / 2, 5 * e / 2, 1 - 3 * e)
    x, y, z = layer_angles(e, 2 * e, 4 * e, "LL")
    assert min(x, y, z) <= 0


@pytest.mark.parametrize("letters", ["LL", "RR", "LR", "RL"])
def test_layer_triples_sum_to_pi(letters):
    u, w, v = F(1, 5), F(2, 7), F(1, 4)
    assert sum(layer_angles(u, w, v, letters)) == 1


def test_layer_range():
    with pytest.raises(RangeViolation):
        layer_angles(EPS, F(1), EPS, "LL")


def _unit_slopes(max_q):
    for q in range(2, max_q + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield Slope(p, q)


def test_product_m1():
    w = construct_w_product(farey_path(INF, Slope(1, 2)), EPS).values
    assert w == [EPS, 2 * EPS, EPS]


@pytest.mark.parametrize("target", list(_unit_slopes(9)) + [Slope(13, 5), Slope(-7, 4)])
def test_product_sequences_satisfy_conditions(target):
    path = farey_path(INF, target)
    w = construct_w_product(path, EPS).values
    assert (w[0], w[1], w[path.m], w[path.m + 1]) == (EPS, 2 * EPS, 2 * EPS, EPS)
    assert conditions_hold(w, path, range(1, path.m + 1))


def test_product_has_hinge_case():
    assert any(hinge_indices(farey_path(INF, s)) and farey_path(INF, s).m == 4 for s in _unit_slopes(12))


def test_lp_agrees_with_product_up_to_slack():
    path = farey_path(INF, Slope(3, 7))
    m = path.m
    pins = {0: EPS, 1: 2 * EPS, m: 2 * EPS, m + 1: EPS}
    w = solve_w_feasibility(pins, path, range(1, m + 1), m + 2).values
    assert conditions_hold(w, path, range(1, m + 1))
    ref = construct_w_product(path, EPS).values
    assert [w[j] for j in pins] == [ref[j] for j in pins]
    assert conditions_hold(ref, path, range(1, m + 1))


def test_twobridge_pins():
    path = farey_path(INF, Slope(2, 5))
    w = solve_w_feasibility({1: F(1), 3: F(1)}, path, [2], 4).values
    assert 0 < w[2] < 1
    assert _twobridge_w(farey_path(INF, Slope(2, 5))).values[2] < 1
    with pytest.raises(Infeasible):
        _twobridge_w(farey_path(INF, Slope(1, 3)))


def test_feasibility_examples():
    half = F(1, 2)
    assert tangle_feasible(half, half, farey_path(INF, Slope(1, 2)))
    third = farey_path(INF, Slope(1, 3))
    assert tangle_feasible(F(1, 3) + EPS, F(1, 3) + EPS, third)
    assert not tangle_feasible(F(1, 4), F(1, 4), third)
    with pytest.raises(SlopeTooClose):
        tangle_feasible(half, half, farey_path(INF, Slope(2, 1)))


def test_tangle_worked_example():
    path = farey_path(INF, Slope(1, 3))
    a = b = F(2, 5)
    assert tangle_v(a, b, path) == [F(2, 5), F(4, 5), F(6, 5)]
    assert construct_w_tangle(a, b, path).values == [F(2, 5), F(4, 5), F(1)]
    with pytest.raises(Infeasible):
        construct_w_tangle(F(1, 4), F(1, 4), path)


def test_fold_case():
    assert construct_w_tangle(F(1, 2), F(1, 2), farey_path(INF, Slope(1, 2))).route == "fold"


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 200), st.integers(1, 200), st.integers(1, 60))
def test_reparametrization_shape(v1n, gap, spread):
    v1 = F(v1n, 201)
    vm = 1 + F(gap, 50)
    v = [v1 + (vm - v1) * F(i, spread) for i in range(spread + 1)]
    w = reparametrize([F(0)] + v)[1:]
    assert w[0] == v1 and w[-1] == 1
    steps = [(y - x, t - s) for x, y, s, t in zip(w, w[1:], v, v[1:])]
    # increasing and 1-Lipschitz
    assert all(0 < dw <= dv for dw, dv in steps)
    # strictly concave on an evenly spaced grid
    assert all(w[i - 1] + w[i + 1] < 2 * w[i] for i in range(1, len(w) - 1))


@settings(max_examples=150, deadline=None)
@given(st.integers(3, 12), st.integers(1, 11), st.integers(0, 24), st.integers(0, 24))
def test_tangle_iff(q, p, i, j):
    assume(p < q and gcd(p, q) == 1 and i + j <= 24)
    a, b = F(i, 24), F(j, 24)
    path = farey_path(INF, Slope(p, q))
    feasible = tangle_feasible(a, b, path)
    try:
        w = construct_w_tangle(a, b, path).values
    except Infeasible:
        assert not feasible
        return
    assert feasible
    assert w[0] == a and w[path.m] == 1
    assert conditions_hold(w, path, range(1, path.m))


@pytest.mark.parametrize("q", range(3, 10))
def test_any_pinned_sequence_stays_below_v(q):
    path = farey_path(INF, Slope(1, q))
    for a, b in [(F(1, 3), F(1, 3)), (F(1, 2), F(1, 4))]:
        v = tangle_v(a, b, path)
        try:
            w = solve_w_feasibility({0: a, 1: a + b}, path, range(1, path.m), path.m + 1).values
        except Infeasible:
            continue
        assert all(w[i] <= v[i] for i in range(1, path.m + 1))


def test_three_tangle_table_branch():
    # 1/2 + 1/3 + 1/5 > 1 but the slopes are not all unit fractions
    p = montesinos(1, ["1/2", "1/3", "2/5"])
    d = assemble(p)
    a = assign(d)
    assert "denominator-2 branch" in a.routes["m"]
    assert verify(d, a).ok


def test_all_thirds_branch():
    p = montesinos(1, ["1/3", "2/3", "1/3"])
    d = assemble(p)
    a = assign(d)
    assert verify(d, a).ok


def test_pretzel_237_assignment():
    d = assemble(pretzel(2, 3, 7))
    a = assign(d)
    band = a.bands["m"]
    assert band.a[0] == band.b[0] == F(1, 2)
    assert band.a[1] == band.b[1] == a.epsilon + F(1, 3)
    assert verify(d, a).ok


def test_figure_eight_two_tetrahedra():
    d = assemble(twobridge("2/5"))
    a = assign(d)
    assert len(a.triples) == 2
    for t in a.triples:
        assert all(x > 0 for x in t) and sum(t) == 1


def test_certificate_round_trip():
    d = assemble(pretzel(-2, 3, 7))
    a = assign(d)
    doc = json.loads(json.dumps(certificate(d, a)))
    assert doc["kind"] == "certificate"
    back = assignment_from_json(doc)
    assert back.epsilon == a.epsilon
    assert back.tetrahedra == a.tetrahedra
    assert verify(d, back).ok


def test_epsilon_override():
    d = assemble(pretzel(2, 3, 7))
    assert assign(d, F(1, 256)).epsilon <= F(1, 256)
