"""Rewrite a bracelet tree into reduced form.

Rewrites, in the order they are attempted:

1. delete unaugmented 2-bracelets, composing the gluings around them;
2. absorb trivial tangles whose slope neighbours the bracelet's preferred slope;
3. split connected sums at tangles whose slope equals the preferred slope;
5. replace a 3-bracelet carrying two half-integer tangles by an augmented 1-bracelet;
6. merge large bracelets glued along equal preferred slopes;
7. collapse the last pieces into 0-bracelets.

Rules 1-3 run to a fixed point before 5-7, and are not revisited afterwards.
Internal slope transport across an unaugmented 2-bracelet with k half-twists
is x -> -x + k (orientation reversing, fixing infinity).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .farey import (
    INF,
    REFLECT,
    GluingMap,
    Slope,
    common_neighbor_list,
    common_neighbors,
    to_infinity,
    wedge,
)
from .presentation import Bracelet, Gluing, LinkPresentation, Port, ensure_valid


class NoMatch(Exception):
    pass


@dataclass
class ReductionResult:
    summands: list
    trace: list = field(default_factory=list)


def two_bracelet_transport(k: int) -> GluingMap:
    """Slope transport from port 0 to port 1 of an unaugmented 2-bracelet."""
    return GluingMap(-1, k, 0, 1)


def _remove_gluing(p: LinkPresentation, port: Port):
    p.gluings = [g for g in p.gluings if g.first != port and g.second != port]


def _renumber_after_removal(p: LinkPresentation, bid: str, removed: int):
    for g in p.gluings:
        for attr in ("first", "second"):
            port = getattr(g, attr)
            if port.bracelet == bid and port.index > removed:
                setattr(g, attr, Port(bid, port.index - 1))


def _is_integer(s: Slope) -> bool:
    return s.denom == 1


def _is_half_integer(s: Slope) -> bool:
    return s.denom == 2


# --- step 1 -------------------------------------------------------------------

def step_remove_two_bracelets(p: LinkPresentation) -> LinkPresentation:
    for bid, b in p.bracelets.items():
        if b.degree != 2 or b.augmentation != 0:
            continue
        left, to_left = p.partner(Port(bid, 0))
        right, to_right = p.partner(Port(bid, 1))
        if left.bracelet == bid:
            continue
        q = p.copy()
        _remove_gluing(q, Port(bid, 0))
        _remove_gluing(q, Port(bid, 1))
        del q.bracelets[bid]
        composed = to_right @ two_bracelet_transport(b.half_twists) @ to_left.inverse()
        q.glue(left, right, composed)
        return q
    raise NoMatch("no unaugmented 2-bracelet")


# --- steps 2 and 3 ------------------------------------------------------------

def _tangle_ports(p: LinkPresentation, bid: str):
    """(port index, tangle id, tangle slope in this port's coordinates)."""
    out = []
    for port, other, _ in p.neighbors(bid):
        t = p.bracelets[other.bracelet]
        if t.is_tangle:
            out.append((port.index, t.id, p.transported(port)))
    return out


def step_remove_needless_one(p: LinkPresentation) -> LinkPresentation:
    for bid, b in p.bracelets.items():
        if b.degree <= 1:
            continue
        for index, tid, u in _tangle_ports(p, bid):
            if wedge(u, INF) != 1:
                continue
            q = p.copy()
            _remove_gluing(q, Port(bid, index))
            del q.bracelets[tid]
            _renumber_after_removal(q, bid, index)
            nb = q.bracelets[bid]
            nb.degree -= 1
            nb.half_twists -= u.numer
            return q
    raise NoMatch("no needless trivial tangle")


def step_undo_connected_sums(p: LinkPresentation) -> list[LinkPresentation]:
    for bid, b in p.bracelets.items():
        if b.degree <= 1 or b.augmentation != 0:
            continue
        for index, tid, u in _tangle_ports(p, bid):
            if u != INF:
                continue
            return _split_at(p, bid, tid)
    raise NoMatch("no connected-sum tangle")


def _split_at(p: LinkPresentation, bid: str, tid: str) -> list[LinkPresentation]:
    b = p.bracelets[bid]
    summands = []
    for port, other, g in p.neighbors(bid):
        if other.bracelet == tid:
            continue
        fresh = f"{bid}~{port.index}"
        comp = _component(p, other.bracelet, blocked=bid)
        q = LinkPresentation()
        for cid in comp:
            q.add(Bracelet(**vars(p.bracelets[cid])))
        for e in p.gluings:
            if e.first.bracelet in comp and e.second.bracelet in comp:
                q.glue(e.first, e.second, e.map)
        q.add(Bracelet(fresh, 1, tangle_slope=INF))
        q.glue(Port(fresh, 0), other, g)
        summands.append(q)
    del b
    return summands


def _component(p: LinkPresentation, start: str, blocked: str) -> list[str]:
    seen = [start]
    stack = [start]
    while stack:
        cur = stack.pop()
        for port, other, _ in p.neighbors(cur):
            nxt = other.bracelet
            if nxt != blocked and nxt not in seen:
                seen.append(nxt)
                stack.append(nxt)
    return [bid for bid in p.bracelets if bid in seen]


# --- step 5 -------------------------------------------------------------------

def augmented_preferred_slope(k_normalized: int) -> int:
    """Preferred slope of the augmented 1-bracelet, in the third port's coordinates."""
    return k_normalized - 1


def step_create_augmented(p: LinkPresentation) -> LinkPresentation:
    for bid, b in p.bracelets.items():
        if b.degree != 3 or b.augmentation != 0:
            continue
        halves = [(i, tid, u) for i, tid, u in _tangle_ports(p, bid) if _is_half_integer(u)]
        if len(halves) < 2:
            continue
        (i1, t1, u1), (i2, t2, u2) = halves[:2]
        third = ({0, 1, 2} - {i1, i2}).pop()
        other, g3 = p.partner(Port(bid, third))
        k = b.half_twists - floor(u1.value) - floor(u2.value)
        sigma = augmented_preferred_slope(k)
        # new port coordinates put sigma at infinity
        frame = GluingMap(0, -1, 1, -sigma)
        q = p.copy()
        for i in (0, 1, 2):
            _remove_gluing(q, Port(bid, i))
        del q.bracelets[t1], q.bracelets[t2]
        q.bracelets[bid] = Bracelet(bid, 1, augmentation=1, half_twists=0)
        q.glue(Port(bid, 0), other, g3 @ frame.inverse())
        return q
    raise NoMatch("no 3-bracelet with two half-integer tangles")


# --- step 6 -------------------------------------------------------------------

def step_combine_large(p: LinkPresentation) -> LinkPresentation:
    for g in p.gluings:
        x = p.bracelets[g.first.bracelet]
        y = p.bracelets[g.second.bracelet]
        if not (x.is_large and y.is_large) or g.map(INF) != INF:
            continue
        return _combine(p, g)
    raise NoMatch("no pair of large bracelets with equal slopes")


def _combine(p: LinkPresentation, g: Gluing) -> LinkPresentation:
    x = p.bracelets[g.first.bracelet]
    y = p.bracelets[g.second.bracelet]
    i, j = g.first.index, g.second.index
    m = g.map
    # projectively m is x -> det*x + c
    c = m.b * m.d
    det = m.det
    reflect_y = det == 1
    if reflect_y:
        k = x.half_twists - y.half_twists + c
        y_order = [(j - t) % y.degree for t in range(1, y.degree)]
    else:
        k = x.half_twists + y.half_twists - c
        y_order = [(j + t) % y.degree for t in range(1, y.degree)]
    x_order = [(i + t) % x.degree for t in range(1, x.degree)]

    q = LinkPresentation()
    merged = Bracelet(x.id, x.degree + y.degree - 2, x.augmentation + y.augmentation, k)
    q.add(merged)
    new_index = {}
    for n, idx in enumerate(x_order):
        new_index[(x.id, idx)] = (n, False)
    for n, idx in enumerate(y_order):
        new_index[(y.id, idx)] = (len(x_order) + n, reflect_y)
    for bid, b in p.bracelets.items():
        if bid not in (x.id, y.id):
            q.add(Bracelet(**vars(b)))
    for e in p.gluings:
        if e is g:
            continue
        first, second, mm = e.first, e.second, e.map
        key1 = (first.bracelet, first.index)
        key2 = (second.bracelet, second.index)
        if key1 in new_index:
            n, refl = new_index[key1]
            first = Port(x.id, n)
            if refl:
                mm = mm @ REFLECT
        if key2 in new_index:
            n, refl = new_index[key2]
            second = Port(x.id, n)
            if refl:
                mm = REFLECT @ mm
        q.glue(first, second, mm)
    return q


# --- step 7 -------------------------------------------------------------------

def zero_bracelet_twists(s: Slope, t: Slope) -> int:
    """Half-twists of the band bounded by the 2-bridge link of two tangle slopes."""
    if s == t:
        return 0
    u = common_neighbor_list(s, t)[0]
    m = to_infinity(u)
    return m(t).numer - m(s).numer


def step_zero_bracelets(p: LinkPresentation) -> LinkPresentation:
    for g in p.gluings:
        x = p.bracelets[g.first.bracelet]
        y = p.bracelets[g.second.bracelet]
        if x.is_tangle and y.is_tangle:
            s = g.map(x.tangle_slope)
            t = y.tangle_slope
            if s != t and common_neighbors(s, t) == 0:
                continue
            q = LinkPresentation()
            q.add(Bracelet(x.id, 0, 0, zero_bracelet_twists(s, t)))
            return q
        for tangle, aug, port in ((x, y, g.second), (y, x, g.first)):
            if tangle.is_tangle and aug.degree == 1 and aug.augmentation >= 1:
                u = p.transported(port)
                if wedge(u, INF) != 1:
                    continue
                q = LinkPresentation()
                q.add(Bracelet(aug.id, 0, aug.augmentation, aug.half_twists - u.numer))
                return q
    raise NoMatch("no 0-bracelet pattern")


# --- driver -------------------------------------------------------------------

FIRST_PHASE = (("1", step_remove_two_bracelets), ("2", step_remove_needless_one), ("3", step_undo_connected_sums))
SECOND_PHASE = (("5", step_create_augmented), ("6", step_combine_large), ("7", step_zero_bracelets))


def reduce(p: LinkPresentation) -> ReductionResult:
    ensure_valid(p)
    trace = []
    pending = [p.copy()]
    finished = []
    while pending:
        cur = pending.pop(0)
        progressed = True
        while progressed:
            progressed = False
            for name, step in FIRST_PHASE:
                before = len(cur.gluings)
                try:
                    out = step(cur)
                except NoMatch:
                    continue
                if isinstance(out, list):
                    trace.append((name, f"split into {len(out)} summands"))
                    pending = out[1:] + pending
                    cur = out[0]
                else:
                    trace.append((name, f"spheres {before} -> {len(out.gluings)}"))
                    cur = out
                progressed = True
                break
        finished.append(cur)

    reduced = []
    for cur in finished:
        progressed = True
        while progressed:
            progressed = False
            for name, step in SECOND_PHASE:
                before = len(cur.gluings)
                try:
                    cur = step(cur)
                except NoMatch:
                    continue
                trace.append((name, f"spheres {before} -> {len(cur.gluings)}"))
                progressed = True
                break
        reduced.append(cur)
    return ReductionResult(reduced, trace)


# --- the minimum-distance table -----------------------------------------------

def farey_distance(s: Slope, t: Slope) -> int:
    """Graph distance in the Farey graph, capped at 3."""
    if s == t:
        return 0
    if wedge(s, t) == 1:
        return 1
    if common_neighbors(s, t) > 0:
        return 2
    return 3


def distance_violations(p: LinkPresentation) -> list[str]:
    problems = []
    for g in p.gluings:
        x = p.bracelets[g.first.bracelet]
        y = p.bracelets[g.second.bracelet]
        for b in (x, y):
            if b.degree == 2 and b.augmentation == 0:
                problems.append(f"unaugmented 2-bracelet {b.id}")
        dist = farey_distance(p.transported(g.second), y.preferred_slope())
        need = 1
        if x.is_tangle and y.is_tangle:
            need = 3
        elif x.is_tangle or y.is_tangle:
            need = 2
        if dist < need:
            problems.append(f"{g.first}-{g.second} at distance {dist} < {need}")
    return sorted(set(problems))
