import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arborhyp.classifier import classify
from arborhyp.farey import INF, GluingMap, Slope, slope_reduce, wedge
from arborhyp.presentation import Bracelet, LinkPresentation, Port, conway_sphere_count, montesinos, pretzel, twobridge
from arborhyp.reducer import (
    NoMatch,
    distance_violations,
    reduce,
    step_combine_large,
    step_create_augmented,
    step_remove_needless_one,
    step_remove_two_bracelets,
    step_undo_connected_sums,
    step_zero_bracelets,
)

from corpus import random_presentation


def _frac(s):
    return None if s.denom == 0 else Fraction(s.numer, s.denom)


def _apply(m, x):
    """Mobius action on an extended rational, None standing for infinity."""
    (a, b), (c, d) = m
    if x is None:
        num, den = a, c
    else:
        num, den = a * x + b, c * x + d
    return None if den == 0 else Fraction(num) / den


def _inverse(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    return ((d * det, -b * det), (-c * det, a * det))


def _chain(k, g1, g2, s):
    p = LinkPresentation()
    p.add(Bracelet("m", 3))
    p.add(Bracelet("two", 2, half_twists=k))
    p.add(Bracelet("t", 1, tangle_slope=s))
    p.add(Bracelet("u", 1, tangle_slope=Slope(1, 3)))
    p.add(Bracelet("v", 1, tangle_slope=Slope(2, 5)))
    p.glue(Port("m", 0), Port("two", 0), GluingMap.from_rows(g1))
    p.glue(Port("two", 1), Port("t", 0), GluingMap.from_rows(g2))
    p.glue(Port("m", 1), Port("u", 0))
    p.glue(Port("m", 2), Port("v", 0))
    return p


@pytest.mark.parametrize("k", [-3, -1, 0, 2, 5])
@pytest.mark.parametrize("g1,g2", [(((1, 0), (0, 1)), ((1, 0), (0, 1))), (((1, 2), (0, 1)), ((0, -1), (1, 0))), (((1, 0), (3, 1)), ((2, 1), (1, 1)))])
def test_two_bracelet_removal_matches_probe_transport(k, g1, g2):
    s = Slope(3, 7)
    p = _chain(k, g1, g2, s)
    q = step_remove_two_bracelets(p)
    assert "two" not in q.bracelets
    assert conway_sphere_count(q) == conway_sphere_count(p) - 1
    # port two.1 -> tangle, then the internal x -> k - x, then two.0 -> m
    x = _apply(_inverse(g2), _frac(s))
    x = None if x is None else k - x
    want = _apply(_inverse(g1), x)
    assert _frac(q.transported(Port("m", 0))) == want


def test_no_two_bracelet():
    with pytest.raises(NoMatch):
        step_remove_two_bracelets(pretzel(2, 3, 7))


def test_needless_tangle_removed():
    p = montesinos(0, ["0", "1/3", "2/5", "1/4"])
    q = step_remove_needless_one(p)
    assert q.bracelets["m"].degree == 3
    assert len(q.bracelets) == 4


def test_tangle_at_distance_two_is_needed():
    with pytest.raises(NoMatch):
        step_remove_needless_one(montesinos(0, ["1/2", "1/3", "2/5"]))


def test_three_bracelet_losing_a_tangle_reduces_further():
    result = reduce(montesinos(0, ["2", "1/3", "2/5"]))
    assert [s for s, _ in result.trace][:2] == ["2", "1"]
    (summand,) = result.summands
    # what is left is a two-bridge link with no common neighbour, so nothing else applies
    assert sorted(b.degree for b in summand.bracelets.values()) == [1, 1]
    assert classify(summand).kind == "Candidate"


def test_connected_sum_splits_into_two():
    p = LinkPresentation()
    p.add(Bracelet("m", 3))
    p.add(Bracelet("a", 1, tangle_slope=INF))
    p.add(Bracelet("x", 3, half_twists=1))
    p.add(Bracelet("y", 3, half_twists=-1))
    for n, s in enumerate(["1/3", "2/5", "1/4", "3/7"]):
        p.add(Bracelet(f"t{n}", 1, tangle_slope=slope_reduce(*map(int, s.split("/")))))
    p.glue(Port("m", 0), Port("a", 0))
    # m's preferred slope reads as 1/2 on x and y, so neither pair is degenerate
    p.glue(Port("m", 1), Port("x", 0), GluingMap(1, 0, 2, 1))
    p.glue(Port("m", 2), Port("y", 0), GluingMap(1, 0, 2, 1))
    p.glue(Port("x", 1), Port("t0", 0))
    p.glue(Port("x", 2), Port("t1", 0))
    p.glue(Port("y", 1), Port("t2", 0))
    p.glue(Port("y", 2), Port("t3", 0))
    parts = step_undo_connected_sums(p)
    assert len(parts) == 2
    assert sum(conway_sphere_count(x) for x in parts) < conway_sphere_count(p)
    result = reduce(p)
    assert len(result.summands) == 2
    assert ("3", "split into 2 summands") in result.trace
    assert [classify(x).kind for x in result.summands] == ["Candidate", "Candidate"]


def test_no_connected_sum():
    with pytest.raises(NoMatch):
        step_undo_connected_sums(pretzel(3, 5, 7))


def test_augmented_bracelet_created_from_half_integers():
    p = montesinos(0, ["-1/2", "1/2", "2/7"])
    q = step_create_augmented(p)
    aug = [b for b in q.bracelets.values() if b.augmentation == 1]
    assert len(aug) == 1 and aug[0].degree == 1


def test_half_and_third_do_not_augment():
    with pytest.raises(NoMatch):
        step_create_augmented(montesinos(0, ["1/2", "1/3", "2/7"]))


def test_three_half_integers_augment_once():
    p = montesinos(0, ["1/2", "3/2", "-1/2"])
    q = step_create_augmented(p)
    assert sum(b.augmentation for b in q.bracelets.values()) == 1
    tangles = [b for b in q.bracelets.values() if b.is_tangle]
    assert len(tangles) == 1
    assert step_create_augmented(p).bracelets.keys() == q.bracelets.keys()


def _two_blocks(slopes_left, slopes_right, g=GluingMap(1, 0, 0, 1), aug_left=0):
    p = LinkPresentation()
    p.add(Bracelet("x", len(slopes_left) + 1, augmentation=aug_left))
    p.add(Bracelet("y", len(slopes_right) + 1))
    p.glue(Port("x", 0), Port("y", 0), g)
    for n, s in enumerate(slopes_left):
        p.add(Bracelet(f"l{n}", 1, tangle_slope=Slope(*s)))
        p.glue(Port("x", n + 1), Port(f"l{n}", 0))
    for n, s in enumerate(slopes_right):
        p.add(Bracelet(f"r{n}", 1, tangle_slope=Slope(*s)))
        p.glue(Port("y", n + 1), Port(f"r{n}", 0))
    return p


def test_combine_two_three_bracelets():
    q = step_combine_large(_two_blocks([(1, 3), (2, 5)], [(1, 4), (3, 7)]))
    (big,) = [b for b in q.bracelets.values() if not b.is_tangle]
    assert (big.degree, big.augmentation) == (4, 0)


def test_combine_augmented_with_three_bracelet():
    q = step_combine_large(_two_blocks([], [(1, 4), (3, 7)], aug_left=1))
    (big,) = [b for b in q.bracelets.values() if not b.is_tangle]
    assert (big.degree, big.augmentation) == (2, 1)


def test_combine_needs_equal_slopes():
    with pytest.raises(NoMatch):
        step_combine_large(_two_blocks([(1, 3), (2, 5)], [(1, 4), (3, 7)], g=GluingMap(0, -1, 1, 0)))


def test_zero_bracelet_from_common_neighbor():
    p = LinkPresentation()
    p.add(Bracelet("a", 1, tangle_slope=Slope(0, 1)))
    p.add(Bracelet("b", 1, tangle_slope=Slope(1, 1)))
    p.glue(Port("a", 0), Port("b", 0))
    q = step_zero_bracelets(p)
    (b,) = q.bracelets.values()
    assert (b.degree, b.augmentation) == (0, 0)


def test_augmented_zero_bracelet():
    p = LinkPresentation()
    p.add(Bracelet("a", 1, augmentation=1))
    p.add(Bracelet("b", 1, tangle_slope=Slope(0, 1)))
    p.glue(Port("a", 0), Port("b", 0))
    q = step_zero_bracelets(p)
    (b,) = q.bracelets.values()
    assert (b.degree, b.augmentation) == (0, 1)


def test_no_zero_bracelet_without_common_neighbor():
    with pytest.raises(NoMatch):
        step_zero_bracelets(twobridge("2/5"))


def test_twobridge_distance_two_gives_single_zero_bracelet():
    result = reduce(twobridge("3/2"))
    (s,) = result.summands
    (b,) = s.bracelets.values()
    assert b.degree == 0


def test_pretzel_unchanged():
    result = reduce(pretzel(2, 3, 7))
    (s,) = result.summands
    assert result.trace == []
    assert distance_violations(s) == []
    assert s.bracelets["m"].degree == 3


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_reduce_invariants(seed):
    p = random_presentation(random.Random(seed))
    result = reduce(p)
    assert len(result.trace) <= conway_sphere_count(p) + len(result.summands)
    for s in result.summands:
        assert all(not (b.degree == 2 and b.augmentation == 0) for b in s.bracelets.values())
        if any(b.augmentation >= 2 for b in s.bracelets.values()):
            continue
        assert distance_violations(s) == [] or _known_gap(s)
    total = sum(conway_sphere_count(s) for s in result.summands)
    assert total <= conway_sphere_count(p)


def _known_gap(s):
    """An augmented bracelet whose tangle neighbour sits at its preferred slope (see README limitations)."""
    for g in s.gluings:
        x, y = s.bracelets[g.first.bracelet], s.bracelets[g.second.bracelet]
        if x.is_tangle == y.is_tangle:
            continue
        big, port = (y, g.second) if x.is_tangle else (x, g.first)
        if big.augmentation and s.transported(port) == big.preferred_slope():
            return True
    return False
