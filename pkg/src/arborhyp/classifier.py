"""Recognise the non-hyperbolic families among reduced presentations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .errors import ArborError, NotReduced
from .farey import Slope, slope_reduce
from .presentation import LinkPresentation
from .reducer import distance_violations


class NotLarge(ArborError):
    pass


class NotMontesinos(ArborError):
    pass


@dataclass(frozen=True)
class Unknot:
    def __str__(self):
        return "unknot"


@dataclass(frozen=True)
class FamilyI:
    half_twists: int

    def __str__(self):
        return f"non-hyperbolic: Family I (band with {self.half_twists} half-twists)"


@dataclass(frozen=True)
class FamilyII:
    reason: str

    def __str__(self):
        return f"non-hyperbolic: Family II ({self.reason})"


@dataclass(frozen=True)
class FamilyIII:
    p: int
    q: int
    r: int
    reflected: bool = False

    def __str__(self):
        return f"non-hyperbolic: Family III ({self.p},{self.q},{self.r})"


@dataclass(frozen=True)
class Candidate:
    presentation: LinkPresentation = field(compare=False)
    montesinos: "MontesinosForm | None" = None

    def __str__(self):
        return "candidate (hyperbolic)"


@dataclass
class Classification:
    verdict: object
    notes: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        return type(self.verdict).__name__

    @property
    def hyperbolic(self) -> bool:
        return isinstance(self.verdict, Candidate)


@dataclass(frozen=True)
class IntersectionNumbers:
    n_A: int
    n_B: int


def intersection_numbers(b) -> IntersectionNumbers:
    if not b.is_large or b.augmentation:
        raise NotLarge(f"bracelet {b.id} is not a large unaugmented bracelet")
    return counts_for(b.degree, b.half_twists)


def counts_for(d: int, k: int) -> IntersectionNumbers:
    return IntersectionNumbers(abs(d - k), abs(k))


@dataclass(frozen=True)
class MontesinosForm:
    """A Montesinos block in normal form: tangle slopes in (0, 1) and twist k."""

    block: str
    ports: tuple  # tangle ids in port order
    slopes: tuple
    twists: int
    reflected: bool = False

    @property
    def degree(self) -> int:
        return len(self.slopes)

    def mirror(self) -> "MontesinosForm":
        return MontesinosForm(
            self.block,
            self.ports,
            tuple(slope_reduce(s.denom - s.numer, s.denom) for s in self.slopes),
            self.degree - self.twists,
            not self.reflected,
        )

    @property
    def counts(self) -> IntersectionNumbers:
        return counts_for(self.degree, self.twists)


def montesinos_block(p: LinkPresentation):
    """The unique large bracelet of a Montesinos tree, or None."""
    large = [b for b in p.bracelets.values() if not b.is_tangle]
    if len(large) != 1:
        return None
    b = large[0]
    if b.augmentation or b.degree < 3 or len(p.bracelets) != b.degree + 1:
        return None
    return b


def normalize_montesinos(p: LinkPresentation) -> MontesinosForm:
    b = montesinos_block(p)
    if b is None:
        raise NotMontesinos("not a single unaugmented bracelet with trivial tangles")
    slopes, ports = [], []
    k = b.half_twists
    for port, other, _ in p.neighbors(b.id):
        s = p.transported(port)
        if s.denom in (0, 1):
            raise NotMontesinos(f"tangle slope {s} is not reduced against the block")
        n = floor(s.value)
        k -= n
        slopes.append(slope_reduce(s.numer - n * s.denom, s.denom))
        ports.append(other.bracelet)
    form = MontesinosForm(b.id, tuple(ports), tuple(slopes), k)
    if not any(s.value <= Fraction(1, 2) for s in slopes):
        form = form.mirror()
    return form


def _family_three(form: MontesinosForm):
    if form.degree != 3 or form.twists != 1:
        return None
    if any(s.numer != 1 for s in form.slopes):
        return None
    xs = sorted(s.denom for s in form.slopes)
    if sum(Fraction(1, x) for x in xs) >= 1:
        return FamilyIII(*xs, reflected=form.reflected)
    return None


def _family_two_montesinos(form: MontesinosForm) -> bool:
    return form.degree == 4 and form.twists == 2 and all(s == Slope(1, 2) for s in form.slopes)


def classify(p: LinkPresentation) -> Classification:
    notes = []
    if any(b.augmentation >= 2 for b in p.bracelets.values()):
        return Classification(FamilyII("bracelet augmented more than once"), ["augmentation >= 2"])

    if len(p.bracelets) == 1:
        (b,) = p.bracelets.values()
        if b.degree == 0 and b.augmentation == 0:
            r = b.half_twists
            if abs(r) == 1:
                return Classification(Unknot(), ["0-bracelet with one half-twist"])
            if r == 0:
                notes.append("band without twists: two-component unlink")
            return Classification(FamilyI(r), notes)
        if b.degree == 0 and b.augmentation == 1:
            r = b.half_twists
            if abs(r) == 1:
                return Classification(FamilyI(4 * r), ["augmented 0-bracelet with one half-twist"])
            if r == 0:
                raise NotReduced("augmented 0-bracelet without twists is a connected sum")
            return Classification(FamilyIII(abs(r), 2, 2, reflected=r < 0), ["augmented 0-bracelet"])

    problems = distance_violations(p)
    if problems:
        raise NotReduced("; ".join(problems))

    if montesinos_block(p) is not None:
        form = normalize_montesinos(p)
        notes.append(f"montesinos: d={form.degree}, k={form.twists}, slopes={[str(s) for s in form.slopes]}")
        if _family_two_montesinos(form):
            return Classification(FamilyII("pretzel P(2,-2,2,-2) pattern"), notes)
        for f in (form, form.mirror()):
            hit = _family_three(f)
            if hit is not None:
                return Classification(hit, notes)
        return Classification(Candidate(p, form), notes)

    return Classification(Candidate(p), notes)
