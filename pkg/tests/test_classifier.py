from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arborhyp.classifier import (
    Candidate,
    FamilyI,
    FamilyII,
    FamilyIII,
    NotLarge,
    NotMontesinos,
    Unknot,
    classify,
    counts_for,
    intersection_numbers,
    normalize_montesinos,
)
from arborhyp.errors import NotReduced
from arborhyp.farey import Slope, slope_reduce
from arborhyp.presentation import Bracelet, LinkPresentation, Port, montesinos, pretzel, twobridge


def _crossings(d, k):
    """Count horizontal lines and anti-diagonal lines met by the segment (0, 1/2) -> (d, k + 1/2)."""
    horizontal = sum(1 for y in range(-20, 21) if min(0, k) < y <= max(0, k))
    # diagonals are the lines y - x = c; along the segment y - x runs from 1/2 to k - d + 1/2
    lo, hi = sorted((Fraction(1, 2), Fraction(2 * (k - d) + 1, 2)))
    diagonal = sum(1 for c in range(-40, 41) if lo < c < hi)
    return diagonal, horizontal


@pytest.mark.parametrize("d", range(1, 7))
@pytest.mark.parametrize("k", range(-5, 9))
def test_intersection_numbers_match_crossing_count(d, k):
    n = counts_for(d, k)
    assert (n.n_A, n.n_B) == _crossings(d, k)


def test_intersection_number_anchors():
    assert (counts_for(3, 1).n_A, counts_for(3, 1).n_B) == (2, 1)
    assert (counts_for(4, 2).n_A, counts_for(4, 2).n_B) == (2, 2)
    assert (counts_for(3, 0).n_A, counts_for(3, 0).n_B) == (3, 0)


def test_intersection_numbers_need_large_block():
    with pytest.raises(NotLarge):
        intersection_numbers(Bracelet("t", 1, tangle_slope=Slope(1, 3)))
    with pytest.raises(NotLarge):
        intersection_numbers(Bracelet("a", 2, augmentation=1))


def test_unit_twist_transfer():
    form = normalize_montesinos(montesinos(0, ["3/2", "1/3", "1/7"]))
    assert form.slopes == (Slope(1, 2), Slope(1, 3), Slope(1, 7))
    assert form.twists == -1


def test_reflection_brings_a_slope_below_half():
    form = normalize_montesinos(montesinos(1, ["2/3", "2/3", "3/4"]))
    assert form.reflected
    assert any(s.numer * 2 <= s.denom for s in form.slopes)
    assert form.mirror().mirror() == form


def test_non_montesinos_rejected():
    with pytest.raises(NotMontesinos):
        normalize_montesinos(twobridge("2/5"))


@pytest.mark.parametrize(
    "cols,triple",
    [((2, 3, 6), (2, 3, 6)), ((2, 4, 4), (2, 4, 4)), ((3, 3, 3), (3, 3, 3))] + [((2, 2, n), tuple(sorted((2, 2, n)))) for n in range(2, 7)],
)
def test_family_three_table(cols, triple):
    v = classify(pretzel(*cols)).verdict
    assert isinstance(v, FamilyIII)
    assert (v.p, v.q, v.r) == triple
    assert sum(Fraction(1, x) for x in triple) >= 1


@pytest.mark.parametrize("cols", [(2, 3, 7), (2, 4, 5), (3, 3, 4), (3, 5, 7), (2, 2, 2, 2)])
def test_candidates(cols):
    assert isinstance(classify(pretzel(*cols)).verdict, Candidate)


def test_family_two_pretzel_pattern():
    v = classify(montesinos(2, ["1/2"] * 4)).verdict
    assert isinstance(v, FamilyII)


def test_family_two_double_augmentation():
    p = LinkPresentation()
    p.add(Bracelet("a", 1, augmentation=2))
    p.add(Bracelet("t", 1, tangle_slope=Slope(2, 5)))
    p.glue(Port("a", 0), Port("t", 0))
    assert isinstance(classify(p).verdict, FamilyII)


def _zero(r, n=0):
    p = LinkPresentation()
    p.add(Bracelet("z", 0, augmentation=n, half_twists=r))
    return p


@pytest.mark.parametrize("r", [1, -1])
def test_unknot(r):
    assert isinstance(classify(_zero(r)).verdict, Unknot)


@pytest.mark.parametrize("r", [0, 2, -5])
def test_zero_bracelet_family_one(r):
    assert classify(_zero(r)).verdict == FamilyI(r)


@pytest.mark.parametrize("r", [1, -1])
def test_augmented_zero_one_twist(r):
    assert isinstance(classify(_zero(r, 1)).verdict, FamilyI)


@pytest.mark.parametrize("r", [2, -3, 4])
def test_augmented_zero_family_three(r):
    v = classify(_zero(r, 1)).verdict
    assert (v.p, v.q, v.r) == (abs(r), 2, 2)
    assert v.reflected == (r < 0)


def test_unreduced_input_rejected():
    with pytest.raises(NotReduced):
        classify(montesinos(0, ["0", "1/3", "2/5"]))


def test_verdict_text():
    assert str(classify(pretzel(2, 3, 6)).verdict) == "non-hyperbolic: Family III (2,3,6)"
    assert classify(pretzel(2, 3, 7)).hyperbolic


fractions_in_unit = st.builds(lambda q, p: slope_reduce(1 + p % (q - 1), q), st.integers(2, 9), st.integers(0, 50))


@settings(max_examples=200, deadline=None)
@given(st.lists(fractions_in_unit, min_size=3, max_size=5), st.integers(-3, 6))
def test_mirror_keeps_verdict(slopes, k):
    d = len(slopes)
    a = classify(montesinos(k, slopes)).verdict
    b = classify(montesinos(d - k, [slope_reduce(s.denom - s.numer, s.denom) for s in slopes])).verdict
    assert type(a) is type(b)
    if isinstance(a, FamilyIII):
        assert (a.p, a.q, a.r) == (b.p, b.q, b.r)
        assert a.reflected != b.reflected


@settings(max_examples=200, deadline=None)
@given(st.lists(fractions_in_unit, min_size=3, max_size=5), st.integers(-3, 6), st.integers(-4, 4), st.integers(0, 4))
def test_twist_transfer_keeps_verdict(slopes, k, n, where):
    where %= len(slopes)
    moved = list(slopes)
    moved[where] = slope_reduce(slopes[where].numer + n * slopes[where].denom, slopes[where].denom)
    a = classify(montesinos(k, slopes)).verdict
    b = classify(montesinos(k + n, moved)).verdict
    assert a == b or (isinstance(a, Candidate) and isinstance(b, Candidate))
