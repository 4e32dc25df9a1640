"""Trees of bracelets glued along Conway spheres.

Each port carries its own slope coordinates, normalised so that the
bracelet's preferred slope (crossing segments) is infinity and the
descending / ascending edge families have slopes 0 and 1.  A gluing stores
the matrix taking coordinates at its first port to coordinates at its
second port.
"""
from __future__ import annotations

import copy
from collections import deque
from dataclasses import dataclass, field

from .errors import InvalidPresentation
from .farey import IDENTITY, INF, GluingMap, Slope, as_slope, slope_reduce


@dataclass
class Bracelet:
    id: str
    degree: int
    augmentation: int = 0
    half_twists: int = 0
    tangle_slope: Slope | None = None

    @property
    def is_tangle(self) -> bool:
        return self.degree == 1 and self.augmentation == 0

    @property
    def is_large(self) -> bool:
        return self.degree >= 3 or self.augmentation >= 1

    def preferred_slope(self) -> Slope:
        """Preferred slope expressed in this bracelet's own port coordinates."""
        if self.is_tangle:
            return self.tangle_slope
        return INF


@dataclass(frozen=True)
class Port:
    bracelet: str
    index: int

    def __str__(self):
        return f"{self.bracelet}.{self.index}"


@dataclass
class Gluing:
    first: Port
    second: Port
    map: GluingMap = IDENTITY

    def other(self, port: Port) -> Port:
        return self.second if port == self.first else self.first

    def map_from(self, port: Port) -> GluingMap:
        """Coordinate change from `port` to the opposite port."""
        return self.map if port == self.first else self.map.inverse()


@dataclass
class LinkPresentation:
    bracelets: dict = field(default_factory=dict)
    gluings: list = field(default_factory=list)

    def add(self, bracelet: Bracelet) -> Bracelet:
        self.bracelets[bracelet.id] = bracelet
        return bracelet

    def glue(self, first: Port, second: Port, g: GluingMap = IDENTITY) -> Gluing:
        edge = Gluing(first, second, g)
        self.gluings.append(edge)
        return edge

    def copy(self) -> "LinkPresentation":
        return copy.deepcopy(self)

    def gluing_at(self, port: Port) -> Gluing | None:
        for g in self.gluings:
            if g.first == port or g.second == port:
                return g
        return None

    def partner(self, port: Port) -> tuple[Port, GluingMap]:
        g = self.gluing_at(port)
        if g is None:
            raise InvalidPresentation([f"open port {port}"])
        return g.other(port), g.map_from(port)

    def ports(self, bid: str) -> list[Port]:
        return [Port(bid, i) for i in range(self.bracelets[bid].degree)]

    def neighbors(self, bid: str) -> list[tuple[Port, Port, GluingMap]]:
        """(own port, partner port, map own -> partner) for every port of bid."""
        out = []
        for port in self.ports(bid):
            other, g = self.partner(port)
            out.append((port, other, g))
        return out

    def transported(self, port: Port) -> Slope:
        """Preferred slope of the bracelet across `port`, in `port`'s coordinates."""
        other, g = self.partner(port)
        return g.inverse()(self.bracelets[other.bracelet].preferred_slope())

    def __str__(self):
        from .dsl import emit

        return emit(self)


def validate(p: LinkPresentation) -> list[str]:
    problems = []
    for bid, b in p.bracelets.items():
        if b.id != bid:
            problems.append(f"bracelet key {bid} does not match id {b.id}")
        if b.degree < 0 or b.augmentation < 0:
            problems.append(f"bracelet {bid} has negative degree or augmentation")
        if b.is_tangle and b.tangle_slope is None:
            problems.append(f"trivial tangle {bid} has no slope")
        if not b.is_tangle and b.tangle_slope is not None:
            problems.append(f"bracelet {bid} is not a trivial tangle but has a slope")

    used = {}
    for g in p.gluings:
        if abs(g.map.det) != 1:
            problems.append(f"non-unimodular gluing {g.first}-{g.second} (det {g.map.det})")
        if g.first == g.second:
            problems.append(f"port {g.first} glued to itself")
        for port in (g.first, g.second):
            b = p.bracelets.get(port.bracelet)
            if b is None:
                problems.append(f"unknown bracelet {port.bracelet}")
                continue
            if not 0 <= port.index < b.degree:
                problems.append(f"port {port} out of range")
                continue
            if port in used:
                problems.append(f"port {port} glued twice")
            used[port] = g

    for bid, b in p.bracelets.items():
        for i in range(max(b.degree, 0)):
            if Port(bid, i) not in used:
                problems.append(f"open port {bid}.{i}")

    if p.bracelets and not problems:
        if len(p.gluings) != len(p.bracelets) - 1 or not _connected(p):
            problems.append("gluing graph is not a tree")
    if not p.bracelets:
        problems.append("empty presentation")
    return problems


def _connected(p: LinkPresentation) -> bool:
    adj = {bid: set() for bid in p.bracelets}
    for g in p.gluings:
        adj[g.first.bracelet].add(g.second.bracelet)
        adj[g.second.bracelet].add(g.first.bracelet)
    start = next(iter(adj))
    seen = {start}
    queue = deque([start])
    while queue:
        for nxt in adj[queue.popleft()]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == len(adj)


def ensure_valid(p: LinkPresentation) -> LinkPresentation:
    problems = validate(p)
    if problems:
        raise InvalidPresentation(problems)
    return p


def conway_sphere_count(p: LinkPresentation) -> int:
    return len(p.gluings)


# --- common constructions -------------------------------------------------

def twobridge(slope) -> LinkPresentation:
    """Two trivial tangles of slopes infinity and `slope`, glued by the identity."""
    p = LinkPresentation()
    p.add(Bracelet("t0", 1, tangle_slope=INF))
    p.add(Bracelet("t1", 1, tangle_slope=as_slope(slope)))
    p.glue(Port("t0", 0), Port("t1", 0))
    return p


def montesinos(twists: int, slopes) -> LinkPresentation:
    slopes = [as_slope(s) for s in slopes]
    p = LinkPresentation()
    p.add(Bracelet("m", len(slopes), half_twists=twists))
    for i, s in enumerate(slopes):
        tid = f"t{i + 1}"
        p.add(Bracelet(tid, 1, tangle_slope=s))
        p.glue(Port("m", i), Port(tid, 0))
    return p


def pretzel(*columns: int) -> LinkPresentation:
    return montesinos(1, [slope_reduce(1, c) for c in columns])
