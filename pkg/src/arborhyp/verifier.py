"""Independent checks on an angle assignment.

All angles are Fractions in units of pi.  A block's boundary is the torus
R^2 / <(0,2), (d,k)> with punctures at Z^2; its edges are the verticals V
at integer x, the horizontals H and the diagonals D inside each band.
The exterior angle (bending) of V at x = j is c[j], of H in band j is b[j]
and of D in band j is a[j].
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

PI = Fraction(1)
TWO_PI = Fraction(2)


class MissingSlot(Exception):
    pass


# --- dual graph of the lifted block boundary ------------------------------------

def _moves(face):
    """(crossed edge, next face) for each side of a lifted face."""
    t, x, y = face
    if t == "U":
        return [(("V", x, y), ("L", x - 1, y)), (("H", x, y + 1), ("L", x, y + 1)), (("D", x, y), ("L", x, y))]
    return [(("H", x, y), ("U", x, y - 1)), (("V", x + 1, y), ("U", x + 1, y)), (("D", x, y), ("U", x, y))]


def edge_weight(edge, a, b, c):
    kind, x, _ = edge
    d = len(a)
    if kind == "V":
        return c[x % d]
    if kind == "H":
        return b[x % d]
    return a[x % d]


def _scaled(a, b, c):
    """Integer weights over a common denominator; Dijkstra on Fractions is slow."""
    vals = [Fraction(x) for x in list(a) + list(b) + list(c)]
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    return [int(x * den) for x in a], [int(x * den) for x in b], [int(x * den) for x in c], den


def vertex_bending(a, b):
    d = len(a)
    return [PI - (a[j - 1] + a[j] + b[j - 1] + b[j]) / 2 for j in range(d)]


@dataclass
class NormalCurve:
    """A closed normal curve given by the lifted edges it crosses, in order."""

    crossings: list
    kind: str = "compression"  # "compression", "puncture", "boundary-bigon"
    boundary_crossings: int = 0
    euler: int = 1

    def __len__(self):
        return len(self.crossings)

    def bending(self, a, b, c=None):
        c = vertex_bending(a, b) if c is None else c
        return sum((edge_weight(e, a, b, c) for e in self.crossings), Fraction(0))

    def is_non_backtracking(self) -> bool:
        n = len(self.crossings)
        return all(self.crossings[i] != self.crossings[(i + 1) % n] for i in range(n)) if n > 1 else True


def min_bending(d: int, k: int, a, b, c=None, margin: int | None = None):
    """Least total bending of a compression curve, with a witness walk.

    Every compression curve lifts to a walk from a face to its translate by
    (d, k) and must cross the line x = 0; weights only depend on x, so we
    may start just after crossing V(0, 0) into U(0, 0).
    """
    c = vertex_bending(a, b) if c is None else c
    a, b, c, den = _scaled(a, b, c)
    margin = d + 2 if margin is None else margin
    lo_y, hi_y = min(0, k) - margin, max(0, k) + margin + 1
    start = (("U", 0, 0), ("V", 0, 0))
    target = (("U", d, k), ("V", d, k))
    dist = {start: 0}
    prev = {}
    heap = [(0, 0, start)]
    counter = 1
    while heap:
        cost, _, state = heapq.heappop(heap)
        if cost != dist.get(state):
            continue
        if state == target:
            break
        face, entry = state
        for edge, nxt in _moves(face):
            if edge == entry:
                continue
            if not (-margin <= nxt[1] <= d + margin and lo_y <= nxt[2] <= hi_y):
                continue
            new = cost + edge_weight(edge, a, b, c)
            key = (nxt, edge)
            if key not in dist or new < dist[key]:
                dist[key] = new
                prev[key] = state
                heapq.heappush(heap, (new, counter, key))
                counter += 1
    walk = []
    state = target
    while state != start:
        walk.append(state[1])
        state = prev[state]
    walk.reverse()
    return Fraction(dist[target], den), NormalCurve(walk)


def walk_length_bound(d: int, k: int) -> int:
    return 4 * d + 4 * max(0, -k, k - d) + 4


def min_bending_bruteforce(d: int, k: int, a, b, c=None, max_len: int | None = None):
    """Minimum over every non-backtracking walk of bounded length (layered relaxation)."""
    c = vertex_bending(a, b) if c is None else c
    a, b, c, den = _scaled(a, b, c)
    max_len = walk_length_bound(d, k) if max_len is None else max_len
    start = (("U", 0, 0), ("V", 0, 0))
    goal_face, goal_edge = ("U", d, k), ("V", d, k)
    layer = {start: 0}
    best = None
    for step in range(max_len):
        remaining = max_len - step - 1
        nxt_layer = {}
        for (face, entry), cost in layer.items():
            for edge, nxt in _moves(face):
                if edge == entry:
                    continue
                new = cost + edge_weight(edge, a, b, c)
                if nxt == goal_face and edge == goal_edge:
                    if best is None or new < best:
                        best = new
                    continue
                if abs(nxt[1] - d) + abs(nxt[2] - k) > remaining:
                    continue
                key = (nxt, edge)
                old = nxt_layer.get(key)
                if old is None or new < old:
                    nxt_layer[key] = new
        layer = nxt_layer
    return None if best is None else Fraction(best, den)


# --- reports ---------------------------------------------------------------------

@dataclass
class BlockReport:
    block: str
    local_ok: bool
    vertex_ok: bool
    bending_ok: bool
    min_bending: Fraction | None = None
    witness: NormalCurve | None = None
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.local_ok and self.vertex_ok and self.bending_ok


@dataclass
class VerificationReport:
    edge_sum_ok: bool
    bad_classes: list
    tetrahedra_ok: bool
    bad_tetrahedra: list
    block_reports: list
    structural: list = field(default_factory=list)
    area_samples: list = field(default_factory=list)

    @property
    def ok(self):
        return (
            self.edge_sum_ok
            and self.tetrahedra_ok
            and not self.structural
            and all(r.ok for r in self.block_reports)
        )


def verify_block_conditions(block_id, d, k, a, b, augmented=False, oracle=False) -> BlockReport:
    notes = []
    local = all(0 <= x < PI for x in list(a) + list(b)) and all(0 < x + y <= PI for x, y in zip(a, b))
    c = vertex_bending(a, b)
    # zero-bending edges are erased; what remains must bend strictly less than pi
    local = local and all(0 <= x < PI for x in c)
    vertex = all(
        c[j] * 2 + a[j] + b[j] + a[j - 1] + b[j - 1] == TWO_PI for j in range(d)
    )
    if augmented:
        cones_ok = all(x > 0 for j in range(d) for x in ((PI - a[j]) / 2, (PI - b[j]) / 2, (a[j] + b[j]) / 2))
        return BlockReport(block_id, local and cones_ok, vertex, True, notes=["augmented: coned to the core"])
    value, witness = min_bending(d, k, a, b, c)
    if oracle:
        brute = min_bending_bruteforce(d, k, a, b, c)
        if brute != value:
            notes.append(f"oracle disagrees: {brute} vs {value}")
            return BlockReport(block_id, local, vertex, False, value, witness, notes)
    return BlockReport(block_id, local, vertex, value > TWO_PI, value, witness, notes)


def verify_edge_sums(decomp, assignment):
    bad = []
    for cid, corners in decomp.classes.items():
        total = Fraction(0)
        for corner in corners:
            total += corner_angle(decomp, assignment, corner)
        if total != TWO_PI:
            bad.append((cid, total))
    return not bad, bad


def corner_angle(decomp, assignment, corner):
    if corner[0] == "tet":
        _, tid, pr = corner
        try:
            return assignment.tetrahedra[tid][pr]
        except (KeyError, IndexError):
            raise MissingSlot(f"no angle for tetrahedron {tid} edge {pr}")
    _, bid, key = corner
    band = assignment.bands.get(bid)
    if band is None:
        raise MissingSlot(f"no band angles for block {bid}")
    kind, x, _ = key
    if kind == "V":
        # band.c[i] sits between bands i and i+1, i.e. on the vertical x = i+1
        return PI - band.c[(x - 1) % len(band.c)]
    if kind == "H":
        return PI - band.b[x]
    return PI - band.a[x]


def verify_tetrahedra(assignment):
    """Each tetrahedron: opposite edges agree, angles positive, one triple sums to pi."""
    bad = []
    for tid, angles in enumerate(assignment.tetrahedra):
        verts = sorted({x for pr in angles for x in pr})
        if len(verts) != 4 or len(angles) != 6:
            bad.append((tid, "incomplete"))
            continue
        v0, v1, v2, v3 = verts
        opposite = [((v0, v1), (v2, v3)), ((v0, v2), (v1, v3)), ((v0, v3), (v1, v2))]
        if any(angles[p] != angles[q] for p, q in opposite):
            bad.append((tid, "opposite edges differ"))
            continue
        triple = tuple(angles[p] for p, _ in opposite)
        if any(x <= 0 for x in triple) or sum(triple) != PI:
            bad.append((tid, triple))
    return not bad, bad


def verify(decomp, assignment, oracle=False) -> VerificationReport:
    edge_ok, bad_classes = verify_edge_sums(decomp, assignment)
    tet_ok, bad_tets = verify_tetrahedra(assignment)
    reports = []
    for bid, blk in decomp.blocks.items():
        band = assignment.bands[bid]
        reports.append(verify_block_conditions(bid, blk.degree, blk.twists, band.a, band.b, blk.augmented, oracle))
    return VerificationReport(edge_ok, bad_classes, tet_ok, bad_tets, reports, decomp.audit())


# --- combinatorial area ------------------------------------------------------------

def combinatorial_area(curve: NormalCurve, a, b, c=None) -> Fraction:
    """Sum of exterior angles met by the curve minus 2*pi*chi of what it bounds."""
    total = curve.bending(a, b, c) + Fraction(curve.boundary_crossings, 2)
    return total - TWO_PI * curve.euler


def puncture_loop(x: int, y: int) -> NormalCurve:
    """The small loop around puncture (x, y), crossing its six incident edges."""
    edges = [
        ("V", x, y),
        ("D", x, y),
        ("H", x, y),
        ("V", x, y - 1),
        ("D", x - 1, y - 1),
        ("H", x - 1, y),
    ]
    return NormalCurve(edges, kind="puncture")


def boundary_bigon() -> NormalCurve:
    return NormalCurve([], kind="boundary-bigon", boundary_crossings=4)


@dataclass
class Polygon:
    """A normal piece: exterior angles at its corners and its Euler characteristic."""

    exterior: list
    euler: int = 1

    @property
    def area(self):
        return sum(self.exterior, Fraction(0)) - TWO_PI * self.euler


def glue_polygons(p: Polygon, i: int, q: Polygon, j: int) -> Polygon:
    """Glue side i of p (corners i, i+1) to side j of q (corners j+1, j) into one disk."""
    n, m = len(p.exterior), len(q.exterior)
    pa, pb = p.exterior[i], p.exterior[(i + 1) % n]
    qa, qb = q.exterior[(j + 1) % m], q.exterior[j]
    rest_p = [p.exterior[(i + 1 + t) % n] for t in range(1, n - 1)]
    rest_q = [q.exterior[(j + 1 + t) % m] for t in range(1, m - 1)]
    merged = [pb + qa - PI] + rest_q + [qb + pa - PI] + rest_p
    return Polygon(merged, p.euler + q.euler - 1)


def close_annulus(p: Polygon, i: int, j: int) -> Polygon:
    """Glue two disjoint sides of one polygon to each other, producing an annulus."""
    n = len(p.exterior)
    s = {i, (i + 1) % n, j, (j + 1) % n}
    if len(s) != 4:
        raise ValueError("sides must be disjoint")
    ext = list(p.exterior)
    # corner i+1 meets corner j, corner i meets corner j+1
    merged_a = ext[(i + 1) % n] + ext[j] - PI
    merged_b = ext[i] + ext[(j + 1) % n] - PI
    keep = [ext[t] for t in range(n) if t not in s]
    return Polygon(keep + [merged_a, merged_b], p.euler - 1)
