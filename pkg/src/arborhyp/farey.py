"""Slopes on the four-punctured sphere and paths in the Farey complex.

A slope is a point of P^1(Q) stored as a reduced pair (numer, denom) with
denom >= 0; infinity is (1, 0).  Matrices act on the column vector
(numer, denom), so [[1, 1], [0, 1]] sends 0 to 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

from .errors import EqualSlopes, ZeroZero


@dataclass(frozen=True)
class Slope:
    numer: int
    denom: int

    def __post_init__(self):
        if self.numer == 0 and self.denom == 0:
            raise ZeroZero("0/0 is not a slope")
        if gcd(self.numer, self.denom) != 1 or self.denom < 0 or (self.denom == 0 and self.numer != 1):
            raise ValueError(f"non-canonical slope ({self.numer}, {self.denom}); use slope_reduce")

    @property
    def is_infinite(self) -> bool:
        return self.denom == 0

    @property
    def value(self) -> Fraction | None:
        return None if self.denom == 0 else Fraction(self.numer, self.denom)

    def sort_key(self):
        return (self.denom == 0, self.value or 0)

    def __str__(self):
        if self.denom == 0:
            return "inf"
        if self.denom == 1:
            return str(self.numer)
        return f"{self.numer}/{self.denom}"

    def __repr__(self):
        return f"Slope({self})"


def slope_reduce(numer: int, denom: int) -> Slope:
    if numer == 0 and denom == 0:
        raise ZeroZero("0/0 is not a slope")
    g = gcd(numer, denom)
    numer, denom = numer // g, denom // g
    if denom < 0 or (denom == 0 and numer < 0):
        numer, denom = -numer, -denom
    return Slope(numer, denom)


def as_slope(x) -> Slope:
    """Coerce an int, Fraction, (p, q) pair, 'inf' or 'p/q' string to a Slope."""
    if isinstance(x, Slope):
        return x
    if isinstance(x, tuple):
        return slope_reduce(*x)
    if isinstance(x, int):
        return Slope(x, 1)
    if isinstance(x, Fraction):
        return Slope(x.numerator, x.denominator)
    if isinstance(x, str):
        text = x.strip()
        if text in ("inf", "oo", "1/0", "-inf"):
            return INF
        if "/" in text:
            p, q = text.split("/")
            return slope_reduce(int(p), int(q))
        return Slope(int(text), 1)
    raise TypeError(f"cannot interpret {x!r} as a slope")


INF = Slope(1, 0)
ZERO = Slope(0, 1)
ONE = Slope(1, 1)


def wedge(s: Slope, t: Slope) -> int:
    return abs(s.numer * t.denom - s.denom * t.numer)


@dataclass(frozen=True)
class GluingMap:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows) -> "GluingMap":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @property
    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __call__(self, s: Slope) -> Slope:
        return slope_reduce(self.a * s.numer + self.b * s.denom, self.c * s.numer + self.d * s.denom)

    def __matmul__(self, other: "GluingMap") -> "GluingMap":
        return GluingMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GluingMap":
        det = self.det
        if abs(det) != 1:
            raise ValueError("only unimodular maps are invertible over Z")
        return GluingMap(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = GluingMap(1, 0, 0, 1)
REFLECT = GluingMap(-1, 0, 0, 1)


def shift(n: int) -> GluingMap:
    """The map x -> x + n, a Dehn twist fixing infinity."""
    return GluingMap(1, n, 0, 1)


def apply_gluing(g: GluingMap, s: Slope) -> Slope:
    return g(s)


def to_infinity(s: Slope) -> GluingMap:
    """An orientation-preserving unimodular map sending s to infinity."""
    p, q = s.numer, s.denom
    if q == 0:
        return IDENTITY
    # a*p + b*q = 1 via extended Euclid
    a, b = _bezout(p, q)
    return GluingMap(a, b, -q, p)


def _bezout(p: int, q: int):
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def farey_neighbors_of_infinity_image(s: Slope, t: Slope):
    """Return (M, x, y): M sends s to infinity and M(t) = y/x with x = wedge(s, t)."""
    m = to_infinity(s)
    image = m(t)
    return m, image.denom, image.numer


def common_neighbors(s: Slope, t: Slope) -> int:
    if s == t:
        raise EqualSlopes(f"{s} and {t} coincide")
    _, x, y = farey_neighbors_of_infinity_image(s, t)
    # after moving s to infinity, neighbors of s are the integers
    if x <= 2:
        return 2
    return 1 if y % x in (1, x - 1) else 0


def common_neighbor_list(s: Slope, t: Slope) -> list[Slope]:
    if s == t:
        raise EqualSlopes(f"{s} and {t} coincide")
    m, x, y = farey_neighbors_of_infinity_image(s, t)
    back = m.inverse()
    if x == 1:
        found = [y - 1, y + 1]
    elif x == 2:
        found = [(y - 1) // 2, (y + 1) // 2]
    elif y % x == 1:
        found = [(y - 1) // x]
    elif y % x == x - 1:
        found = [(y + 1) // x]
    else:
        found = []
    return sorted((back(Slope(n, 1)) for n in found), key=Slope.sort_key)


@dataclass(frozen=True)
class FareyPath:
    """Triangles crossed by the geodesic from source to target, triangles[0..m].

    edges[i] is the (right_end, left_end) pair of the edge crossed when
    travelling from triangles[i-1] into triangles[i]; edges[0] = {source, entry}
    and edges[m+1] = {target, exit} are artificial end edges.  word[i] is 'R'
    when the exit edge of triangles[i] contains the right end of its entry edge.
    """

    source: Slope
    target: Slope
    triangles: tuple
    edges: tuple
    word: str
    opposite: tuple  # vertex of triangles[i] off edges[i]
    dropped: tuple  # vertex of triangles[i] off edges[i+1]

    @property
    def m(self) -> int:
        return len(self.triangles) - 1 if self.edges else 0

    @property
    def entry(self) -> Slope:
        return _other(self.edges[0], self.source)

    @property
    def exit(self) -> Slope:
        return _other(self.edges[-1], self.target)

    def edge(self, i: int) -> frozenset:
        return frozenset(self.edges[i])

    def hinge(self, i: int) -> bool:
        """True when triangles i-1 and i carry different letters (1 <= i <= m)."""
        return self.word[i - 1] != self.word[i]

    def reversed(self) -> "FareyPath":
        return farey_path(self.target, self.source, entry=self.exit, exit=self.entry)


def _other(pair, v):
    a, b = pair
    return b if a == v else a


def farey_path(s: Slope, t: Slope, entry: Slope | None = None, exit: Slope | None = None) -> FareyPath:
    if s == t:
        raise EqualSlopes(f"{s} and {t} coincide")
    m, x, y = farey_neighbors_of_infinity_image(s, t)
    back = m.inverse()
    if x == 1:
        third = back(Slope(y + 1, 1))
        return FareyPath(s, t, ((s, t, third),), (), "", (), ())

    n = floor(Fraction(y, x))
    lo, hi = (n, 1), (n + 1, 1)
    if entry is None:
        b_vertex = lo
    else:
        e = m(entry)
        if (e.numer, e.denom) not in (lo, hi):
            raise ValueError(f"{entry} is not a vertex of the first triangle")
        b_vertex = (e.numer, e.denom)
    a_vertex = hi if b_vertex == lo else lo
    inf = (1, 0)

    tris = [(inf, lo, hi)]
    edges = [(b_vertex, inf) if b_vertex == lo else (inf, b_vertex), (lo, hi)]
    opposite = [a_vertex]
    dropped = [inf]
    target = (y, x)
    while True:
        med = (lo[0] + hi[0], lo[1] + hi[1])
        tris.append((lo, hi, med))
        opposite.append(med)
        if med == target:
            break
        if y * med[1] < med[0] * x:
            dropped.append(hi)
            hi = med
        else:
            dropped.append(lo)
            lo = med
        edges.append((lo, hi))

    # final artificial edge {target, exit}
    if exit is None:
        m_rev = to_infinity(t)
        s_img = m_rev(s)
        n_rev = floor(Fraction(s_img.numer, s_img.denom))
        exit = m_rev.inverse()(Slope(n_rev, 1))
    e = m(exit)
    b_end = (e.numer, e.denom)
    if b_end not in (lo, hi):
        raise ValueError(f"{exit} is not a vertex of the last triangle")
    dropped.append(hi if b_end == lo else lo)
    last_right = edges[-1][0]
    edges.append((b_end, target) if b_end == last_right else (target, b_end))

    def conv(v):
        return back(slope_reduce(*v))

    word = "".join("R" if edges[i][0] in edges[i + 1] else "L" for i in range(len(tris)))
    return FareyPath(
        s,
        t,
        tuple(tuple(conv(v) for v in tri) for tri in tris),
        tuple((conv(a), conv(b)) for a, b in edges),
        word,
        tuple(conv(v) for v in opposite),
        tuple(conv(v) for v in dropped),
    )
