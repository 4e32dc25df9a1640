"""Explicit angle structures on a block decomposition.

Angles are exact Fractions in units of pi.  Each layered region carries a
sequence w[0..m+1] of bending parameters, one per pleated surface.  Surface i
is triangulated by path.triangles[i]; it bends by w[i] along the slope
path.opposite[i], by -w[i+1] along path.dropped[i] and by w[i+1] - w[i] along
the third slope.  The layer between surfaces i-1 and i gets half the change in
bending at each side edge and pi - w[i] at its diagonals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .decomposer import SlopeTooClose
from .errors import ArborError, Infeasible
from .farey import INF, FareyPath, Slope, wedge
from .lp import LPInfeasible, maximize
from .verifier import min_bending, vertex_bending

PI = Fraction(1)
DEFAULT_EPSILON = Fraction(1, 16)
HALVINGS = 12


class RangeViolation(ArborError, ValueError):
    pass


class AssignmentFailed(ArborError):
    pass


@dataclass
class BandAngles:
    a: list
    b: list
    c: list


def band_edge_angles(a, b) -> BandAngles:
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    for i, (x, y) in enumerate(zip(a, b)):
        if not (0 <= x < PI and 0 <= y < PI and 0 < x + y <= PI):
            raise RangeViolation(f"band {i}: (a, b) = ({x}, {y}) out of range")
    d = len(a)
    c = [PI - (a[i] + a[(i + 1) % d] + b[i] + b[(i + 1) % d]) / 2 for i in range(d)]
    return BandAngles(a, b, c)


def girth_check(a, b, d: int) -> bool:
    return (d - 2) * PI > sum(max(x, y) for x, y in zip(a, b))


def layer_angles(u, w, v, letters: str):
    """Angles (x, y, z) at the right end, left end and diagonal of a layer."""
    if not 0 < w < PI:
        raise RangeViolation(f"w = {w} outside (0, pi)")
    half = Fraction(1, 2)
    table = {
        "LL": (half * (u + v), half * (-u + 2 * w - v)),
        "RR": (half * (-u + 2 * w - v), half * (u + v)),
        "LR": (half * (u + w - v), half * (-u + w + v)),
        "RL": (half * (-u + w + v), half * (u + w - v)),
    }
    x, y = table[letters]
    return x, y, PI - w


def hinge_indices(path: FareyPath):
    return {i for i in range(1, path.m + 1) if path.hinge(i)}


def conditions_hold(w, path: FareyPath, indices) -> bool:
    """Range, concavity and hinge conditions at the given indices."""
    hinges = hinge_indices(path)
    for i in indices:
        u, x, v = w[i - 1], w[i], w[i + 1]
        if not 0 < x < PI:
            return False
        if i in hinges:
            if not abs(v - u) < x:
                return False
        elif not u + v < 2 * x:
            return False
    return True


@dataclass
class WSequence:
    values: list  # index -> Fraction or None
    kind: str
    route: str


# --- product regions ---------------------------------------------------------------

def construct_w_product(path: FareyPath, eps) -> WSequence:
    eps = Fraction(eps)
    m = path.m
    if m < 1:
        raise ValueError("product layers need m >= 1")
    delta = eps / (4 * (m + 2) ** 2)
    w = [None] * (m + 2)
    w[0], w[m + 1] = eps, eps
    for i in range(1, m + 1):
        w[i] = 2 * eps + delta * (i - 1) * (m - i)
    return WSequence(w, "product", "quadratic bump")


# --- tangle regions -----------------------------------------------------------------

def tangle_feasible(a, b, path: FareyPath) -> bool:
    s, t = path.source, path.target
    n = wedge(s, t)
    if n <= 1:
        raise SlopeTooClose("tangle slope is a neighbour of the block slope")
    a, b = Fraction(a), Fraction(b)
    if n == 2:
        return a + b == PI
    big_a, big_b = path.opposite[0], path.entry
    return a * wedge(big_b, t) + b * wedge(big_a, t) > PI > a + b


def tangle_v(a, b, path: FareyPath):
    big_a, big_b = path.opposite[0], path.entry
    return [a * wedge(big_b, q) + b * wedge(big_a, q) for q in path.opposite]


def reparametrize(v):
    """w_i = f(v_i) for the quadratic f pinned at f(v_1) = v_1, f(v_m) = pi."""
    v1, vm = v[1], v[-1]
    p_gap = PI - v1
    length = vm - v1
    lam = min(Fraction(1), 3 * p_gap / (2 * length))
    mu = (lam * length - p_gap) / length**2
    return [v1 + lam * (t - v1) - mu * (t - v1) ** 2 for t in v]


def construct_w_tangle(a, b, path: FareyPath) -> WSequence:
    a, b = Fraction(a), Fraction(b)
    m = path.m
    if m == 1:
        if a + b != PI:
            raise Infeasible("a folded band needs a + b = pi")
        return WSequence([a, a + b], "tangle", "fold")
    if not tangle_feasible(a, b, path):
        raise Infeasible(f"(a, b) = ({a}, {b}) is outside the feasible region")
    v = tangle_v(a, b, path)
    w = [a] + reparametrize(v)[1:]
    route = "quadratic reparametrization"
    if not conditions_hold(w, path, range(1, m)):
        pins = {0: a, 1: a + b, m: PI}
        w = solve_w_feasibility(pins, path, range(1, m), m + 1).values
        route = "exact LP"
    return WSequence(w, "tangle", route)


# --- exact LP fallback ----------------------------------------------------------------

def solve_w_feasibility(pins: dict, path: FareyPath, indices, size: int) -> WSequence:
    """Maximise the least slack of the range, concavity and hinge conditions with pinned entries; raise Infeasible if none."""
    indices = list(indices)
    free = sorted({j for i in indices for j in (i - 1, i, i + 1)} - set(pins))
    free = [j for j in free if 0 <= j < size]
    col = {j: n for n, j in enumerate(free)}
    t_col = len(free)
    hinges = hinge_indices(path)
    rows, rhs = [], []

    def add(coeffs, slack, const):
        # sum coeffs[j] w_j + slack * t <= const, moving pinned values to the right
        row = [Fraction(0)] * (t_col + 1)
        bound = Fraction(const)
        for j, cf in coeffs.items():
            if j in pins:
                bound -= cf * pins[j]
            else:
                row[col[j]] += cf
        row[t_col] += slack
        rows.append(row)
        rhs.append(bound)

    for j in free:
        add({j: -1}, 1, 0)
        add({j: 1}, 1, PI)
    for i in indices:
        if i in hinges:
            add({i + 1: 1, i - 1: -1, i: -1}, 1, 0)
            add({i - 1: 1, i + 1: -1, i: -1}, 1, 0)
        else:
            add({i - 1: 1, i + 1: 1, i: -2}, 1, 0)
    add({}, 1, PI)
    objective = [Fraction(0)] * t_col + [Fraction(1)]
    try:
        value, x = maximize(objective, rows, rhs)
    except LPInfeasible:
        raise Infeasible("pinned chain system has no solution")
    if value <= 0:
        raise Infeasible("pinned chain system has no strictly feasible point")
    w = [None] * size
    for j, v in pins.items():
        w[j] = Fraction(v)
    for j in free:
        w[j] = x[col[j]]
    return WSequence(w, "lp", f"exact LP, slack {value}")


# --- block angles --------------------------------------------------------------------

def _balance(path: FareyPath, eps):
    n = wedge(path.source, path.target)
    if n == 2:
        return Fraction(1, 2), Fraction(1, 2)
    return eps + PI / n, eps + PI / n


def _montesinos_angles(blk, slopes, eps, big=3):
    """Band angles for a strongly Montesinos block; slopes are y/x in (0, 1) per port."""
    d, k = blk.degree, blk.twists
    n_a, n_b = abs(d - k), abs(k)
    xs = [s.denom for s in slopes]
    ys = [s.numer for s in slopes]
    if n_a >= 3 or n_b >= 3:
        a, b = [], []
        for x in xs:
            beta = Fraction(1) if x == 2 else Fraction(2, 3)
            if n_a >= 3:
                a.append(PI - eps)
                b.append(beta * eps)
            else:
                a.append(beta * eps)
                b.append(PI - eps)
        return a, b, f"crossings ({n_a}, {n_b}): one family near pi"
    if d == 4:
        return _balanced(xs, eps), "d=4 balance"
    if d == 3 and k in (1, 2):
        if sum(Fraction(1, x) for x in xs) < 1:
            a = _balanced(xs, eps)
            return a[0], a[1], "d=3 balance"
        mirrored = k == 2
        if mirrored:
            ys = [x - y for x, y in zip(xs, ys)]
        alpha, beta, note = _three_tangle_table(xs, ys, eps, big)
        a = [PI - al for al in alpha]
        b = list(beta)
        if mirrored:
            a, b = b, a
        return a, b, note + (" (mirrored)" if mirrored else "")
    raise AssignmentFailed(f"unexpected strongly Montesinos block d={d}, k={k}")


def _balanced(xs, eps):
    a = [Fraction(1, 2) if x == 2 else eps + PI / x for x in xs]
    return a, list(a)


def _three_tangle_table(xs, ys, eps, big):
    order = sorted(range(3), key=lambda i: (ys[i] >= 2, xs[i]))
    # order[2] has y >= 2; order[0] is a slope of denominator 2 when present
    i1, i2, i3 = order
    alpha, beta = [None] * 3, [None] * 3
    if all(x == 3 for x in xs):
        mu, big_m = Fraction(1, 3), Fraction(big)
        beta[i1], beta[i2], beta[i3] = eps, eps, mu * eps
        alpha[i1], alpha[i2], alpha[i3] = (2 - mu) * eps, (2 - mu) * eps, big_m * eps
        return alpha, beta, f"three tangles of denominator 3, small 1/3, large {big}"
    mu, m, big_m = Fraction(1, 4), Fraction(1, 3), Fraction(big)
    beta[i1], beta[i2], beta[i3] = (1 + m) * eps, eps, mu * eps
    alpha[i1], alpha[i2], alpha[i3] = (1 + m) * eps, (xs[i2] - 1 - mu) * eps, big_m * eps
    return alpha, beta, f"denominator-2 branch, small 1/4, bump 1/3, large {big}"


def choose_block_angles(blk, decomp, eps, eps0=None, montesinos_slopes=None, big=3):
    eps0 = eps if eps0 is None else eps0
    if montesinos_slopes is not None:
        a, b, note = _montesinos_angles(blk, montesinos_slopes, eps, big)
        return a, b, note
    a, b = [], []
    for ctx in blk.ports:
        if ctx.kind == "product":
            a.append(eps0)
            b.append(eps0)
        elif ctx.kind == "direct":
            if ctx.virtual == "A":
                a.append(Fraction(0))
                b.append(eps0)
            else:
                a.append(eps0)
                b.append(Fraction(0))
        else:
            x, y = _balance(ctx.path, eps)
            a.append(x)
            b.append(y)
    return a, b, "product ports small, tangle ports balanced"


# --- assignment ------------------------------------------------------------------------

@dataclass
class AngleAssignment:
    epsilon: Fraction
    bands: dict
    w: dict
    tetrahedra: list  # per tetrahedron: {edge pair: angle}
    triples: list
    routes: dict = field(default_factory=dict)


def pleating(path: FareyPath, w, i: int, sigma: Slope):
    if sigma == path.opposite[i]:
        return w[i]
    if sigma == path.dropped[i]:
        return -w[i + 1]
    return w[i + 1] - w[i]


def tetrahedron_angles(tet, path: FareyPath, w):
    i = tet.layer
    angles = {}
    for pr, sigma in tet.side_slopes.items():
        angles[pr] = (pleating(path, w, i - 1, sigma) - pleating(path, w, i, sigma)) / 2
    for pr in tet.diagonals:
        angles[pr] = PI - w[i]
    return angles


def _triple(tet, angles):
    return tuple(angles[p] for p, _ in tet.opposite_pairs())


def _montesinos_slopes(decomp, blk):
    out = []
    for j, ctx in enumerate(blk.ports):
        t = ctx.path.target
        out.append(t)
    return out


def _twobridge_w(path: FareyPath):
    m = path.m
    if m < 3:
        # both folds would meet with no layer between them
        raise Infeasible(f"two-bridge path with m = {m} has no interior layer")
    pins = {1: PI, m: PI}
    return solve_w_feasibility(pins, path, range(2, m), m + 1)


def assign(decomp, epsilon=None, tries: int = HALVINGS) -> AngleAssignment:
    eps = Fraction(epsilon) if epsilon is not None else DEFAULT_EPSILON
    last_error = None
    for _ in range(tries + 1):
        try:
            result = _assign_once(decomp, eps)
        except (Infeasible, RangeViolation, AssignmentFailed) as exc:
            last_error = exc
        else:
            if result is not None:
                return result
            last_error = AssignmentFailed(f"angles not positive at epsilon = {eps}")
        eps /= 2
    raise AssignmentFailed(str(last_error))


def _assign_once(decomp, eps):
    bands, routes, w_all = {}, {}, {}
    strongly = decomp.montesinos is not None
    for bid, blk in decomp.blocks.items():
        slopes = _montesinos_slopes(decomp, blk) if strongly else None
        choice = None
        for big in (3, 4, 6, 10):
            a, b, note = choose_block_angles(blk, decomp, eps, montesinos_slopes=slopes, big=big)
            band = band_edge_angles(a, b)
            if blk.augmented or _bending_ok(blk, band):
                choice = (band, note)
                break
            if not strongly:
                break
        if choice is None:
            return None
        bands[bid], routes[bid] = choice

    for rid, region in decomp.regions.items():
        path = region.path
        if region.kind == "direct":
            routes[rid] = "direct gluing, no layers"
            continue
        if region.kind == "twobridge":
            seq = _twobridge_w(path)
        elif region.kind == "tangle":
            bid, j = region.near
            band = bands[bid]
            seq = construct_w_tangle(band.a[j], band.b[j], path)
        else:
            (xb, i), (yb, j) = region.near, region.far
            x_band, y_band = bands[xb], bands[yb]
            a0, b0 = x_band.a[i], x_band.b[i]
            # the far block sees A' and B' through the exit of the path
            a1, b1 = y_band.a[j], y_band.b[j]
            m = path.m
            if a0 == b0 == a1 == b1:
                seq = construct_w_product(path, a0)
                if not conditions_hold(seq.values, path, range(1, m + 1)):
                    seq = None
            else:
                seq = None
            if seq is None:
                pins = {0: a0, 1: a0 + b0, m: a1 + b1, m + 1: a1}
                seq = solve_w_feasibility(pins, path, range(1, m + 1), m + 2)
        w_all[rid] = seq.values
        routes[rid] = seq.route

    tets, triples = [], []
    for tet in decomp.tetrahedra:
        if tet.kind == "layer":
            region = decomp.regions[tet.region]
            angles = tetrahedron_angles(tet, region.path, w_all[tet.region])
        else:
            band = bands[tet.block]
            angles = {}
            for pr, (role, j) in tet.roles.items():
                a, b = band.a[j], band.b[j]
                angles[pr] = {"A": (PI - a) / 2, "B": (PI - b) / 2, "G": (a + b) / 2}[role]
        tri = _triple(tet, angles)
        if any(x <= 0 for x in tri):
            return None
        tets.append(angles)
        triples.append(tri)
    return AngleAssignment(eps, bands, w_all, tets, triples, routes)


def _bending_ok(blk, band) -> bool:
    value, _ = min_bending(blk.degree, blk.twists, band.a, band.b)
    return value > 2


# --- certificate --------------------------------------------------------------------

def _q(x):
    return None if x is None else [x.numerator, x.denominator]


def _unq(pair):
    return None if pair is None else Fraction(pair[0], pair[1])


def certificate(decomp, assignment) -> dict:
    """Exact angles (pi units, [numer, denom] pairs) for every slot of the decomposition."""
    from .dsl import to_json as presentation_json

    return {
        "schema": "arborhyp/1",
        "kind": "certificate",
        "presentation": presentation_json(decomp.presentation),
        "epsilon": _q(assignment.epsilon),
        "bands": {
            bid: {"a": [_q(x) for x in band.a], "b": [_q(x) for x in band.b], "c": [_q(x) for x in band.c]}
            for bid, band in assignment.bands.items()
        },
        "w": {rid: [_q(x) for x in w] for rid, w in assignment.w.items()},
        "tetrahedra": [
            {"angles": {f"{x}{y}": _q(v) for (x, y), v in sorted(angles.items())}}
            for angles in assignment.tetrahedra
        ],
        "routes": dict(assignment.routes),
    }


def assignment_from_json(doc: dict) -> AngleAssignment:
    bands = {
        bid: BandAngles([_unq(x) for x in v["a"]], [_unq(x) for x in v["b"]], [_unq(x) for x in v["c"]])
        for bid, v in doc["bands"].items()
    }
    tets, triples = [], []
    for entry in doc["tetrahedra"]:
        angles = {(int(k[0]), int(k[1])): _unq(v) for k, v in entry["angles"].items()}
        tets.append(angles)
        verts = sorted({x for pr in angles for x in pr})
        triples.append(
            tuple(angles.get((verts[0], verts[i])) for i in (1, 2, 3)) if len(verts) == 4 else ()
        )
    w = {rid: [_unq(x) for x in seq] for rid, seq in doc.get("w", {}).items()}
    return AngleAssignment(_unq(doc["epsilon"]), bands, w, tets, triples, dict(doc.get("routes", {})))
