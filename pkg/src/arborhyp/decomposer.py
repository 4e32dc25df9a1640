"""Block decomposition of a candidate link complement.

Every Conway sphere is a four-punctured sphere with punctures 1..4 and the
tetrahedral graph on them.  The three perfect matchings

    0: {12, 34}    1: {13, 24}    2: {14, 23}

carry the three slopes of a Farey triangle.  Between consecutive pleated
surfaces sit two tetrahedra realising a diagonal exchange.
Edges are identified only through face gluings; edge classes come out of a
union-find pass over those gluings.

Blocks are modelled on the strip picture: the boundary torus is R^2 minus
Z^2 modulo (0, 2) and (d, k).  Band j is the strip j < x < j+1 and its
punctures (j,0), (j,1), (j+1,0), (j+1,1) are labelled 1, 2, 3, 4.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import floor

from .classifier import Candidate, classify, montesinos_block
from .errors import ArborError, NotCandidate
from .farey import INF, FareyPath, GluingMap, Slope, farey_path, shift, slope_reduce, wedge
from .presentation import LinkPresentation, Port

MATCHINGS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))
GAMMA, DESCENDING, ASCENDING = 0, 1, 2


class SlopeTooClose(ArborError):
    pass


class NotAugmented(ArborError):
    pass


class StructuralError(ArborError):
    pass


def pair(u, v):
    return (u, v) if u < v else (v, u)


def matching_of(p) -> int:
    p = pair(*p)
    for idx, m in enumerate(MATCHINGS):
        if p in m:
            return idx
    raise ValueError(p)


# --- union-find -----------------------------------------------------------------

class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


# --- records ----------------------------------------------------------------------

@dataclass
class PortContext:
    kind: str  # "tangle", "product", "direct"
    shift: int
    region: str
    role: str  # "near" or "far" for block-block regions
    wedge: int
    path: FareyPath | None = None
    virtual: str | None = None  # "A" or "B": the zero-angle family of a direct gluing


@dataclass
class Block:
    id: str
    degree: int
    twists: int  # deck parameter after port normalisation
    augmented: bool
    ports: list = field(default_factory=list)

    @property
    def bands(self):
        return [("square" if c.kind == "direct" else "triangles") for c in self.ports]

    def canonical_point(self, x: int, y: int):
        q = x // self.degree
        return (x - q * self.degree, (y - q * self.twists) % 2)

    def edge_key(self, kind: str, x: int, y: int):
        return (kind,) + self.canonical_point(x, y)

    def band_faces(self, j: int):
        """Faces of band j as (name, {label pair: edge key}), labels 1..4."""

        def label(x, y):
            return (1 if y % 2 == 0 else 2) if x == j else (3 if y % 2 == 0 else 4)

        faces = []
        for h in (0, 1):
            up = {
                pair(label(j, h), label(j, h + 1)): self.edge_key("V", j, h),
                pair(label(j, h + 1), label(j + 1, h + 1)): self.edge_key("H", j, h + 1),
                pair(label(j, h), label(j + 1, h + 1)): self.edge_key("D", j, h),
            }
            low = {
                pair(label(j, h), label(j + 1, h)): self.edge_key("H", j, h),
                pair(label(j + 1, h), label(j + 1, h + 1)): self.edge_key("V", j + 1, h),
                pair(label(j, h), label(j + 1, h + 1)): self.edge_key("D", j, h),
            }
            faces.append((("U", j, h), up))
            faces.append((("L", j, h), low))
        return faces

    def edge_keys(self):
        keys = []
        for j in range(self.degree):
            for h in (0, 1):
                for kind in "VHD":
                    keys.append(self.edge_key(kind, j, h))
        return keys

    def punctures(self):
        return [(j, h) for j in range(self.degree) for h in (0, 1)]


@dataclass
class Tetrahedron:
    id: int
    kind: str  # "layer" or "cone"
    region: str | None
    layer: int | None
    vertices: tuple
    # layer tetrahedra: slopes of the two side pairs and the diagonal pairs
    side_slopes: dict = field(default_factory=dict)
    diagonals: tuple = ()
    # cone tetrahedra: role of each edge, ("A"|"B"|"G", band) for opposite pairs
    block: str | None = None
    roles: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)

    def opposite_pairs(self):
        v = self.vertices
        return [
            ((v[0], v[1]), (v[2], v[3])),
            ((v[0], v[2]), (v[1], v[3])),
            ((v[0], v[3]), (v[1], v[2])),
        ]


@dataclass
class Region:
    id: str
    kind: str  # "product", "direct", "tangle", "twobridge"
    path: FareyPath | None
    near: tuple | None = None  # (block id, port index)
    far: tuple | None = None
    layers: tuple = ()
    folds: tuple = ()
    surfaces: tuple = ()


@dataclass
class BlockDecomposition:
    presentation: LinkPresentation
    blocks: dict
    regions: dict
    tetrahedra: list
    classes: dict  # class id -> list of corners
    face_counts: dict
    folded_faces: int
    montesinos: object = None

    @property
    def edge_count(self) -> int:
        return len(self.classes)

    @property
    def face_count(self) -> int:
        internal = sum(1 for k in self.face_counts if k[0] == "S")
        radial = sum(1 for k in self.face_counts if k[0] == "R")
        return internal - self.folded_faces // 2 + radial

    def euler_characteristic(self) -> int:
        return -self.edge_count + self.face_count - len(self.tetrahedra)

    def audit(self) -> list[str]:
        problems = []
        for key, occ in self.face_counts.items():
            folds = occ.count("fold")
            cells = len(occ) - folds
            if not ((cells == 2 and folds == 0) or (cells == 1 and folds == 1)):
                problems.append(f"face {key} has incidences {occ}")
        if self.euler_characteristic() != 0:
            problems.append(f"euler characteristic {self.euler_characteristic()} != 0")
        return problems


# --- construction -----------------------------------------------------------------


class _Builder:
    def __init__(self, p: LinkPresentation):
        self.p = p
        self.uf = UnionFind()
        self.corners = []  # (node, corner description)
        self.faces = {}
        self.folded = 0
        self.tets = []
        self.regions = {}
        self.blocks = {}
        self.cone_faces = {}

    # face bookkeeping
    def attach(self, surface_key, v, occupant, edges):
        """Attach a cell face to face `v` of a surface; edges maps label pairs to nodes."""
        self.faces.setdefault(("S",) + surface_key + (v,), []).append(occupant)
        for pr, node in edges.items():
            self.uf.union(("S",) + surface_key + (pr,), node)

    def fold(self, surface_key, o_matching):
        (p, q), (r, t) = MATCHINGS[o_matching]
        swaps = ((r, t, {t: r, r: t}), (p, q, {p: q, q: p}))
        for v1, v2, perm in swaps:
            for v in (v1, v2):
                self.faces.setdefault(("S",) + surface_key + (v,), []).append("fold")
            others = [x for x in (1, 2, 3, 4) if x != v1]
            for a in others:
                for b in others:
                    if a < b:
                        mapped = pair(perm.get(a, a), perm.get(b, b))
                        self.uf.union(("S",) + surface_key + ((a, b),), ("S",) + surface_key + (mapped,))
            self.folded += 2

    def layer(self, rid, path, i, match_before, match_after):
        removed = path.dropped[i - 1]
        p0, p1 = MATCHINGS[match_before[removed]]
        sides = {}
        for slope, idx in match_before.items():
            if slope != removed:
                for pr in MATCHINGS[idx]:
                    sides[pr] = slope
        for bottom, top in ((p0, p1), (p1, p0)):
            tid = len(self.tets)
            tet = Tetrahedron(tid, "layer", rid, i, (1, 2, 3, 4), dict(sides), (bottom, top))
            self.tets.append(tet)
            for pr in sides:
                self.uf.union(("T", tid, pr), ("S", rid, i - 1, pr))
                self.uf.union(("T", tid, pr), ("S", rid, i, pr))
            self.uf.union(("T", tid, bottom), ("S", rid, i - 1, bottom))
            self.uf.union(("T", tid, top), ("S", rid, i, top))
            for pr in sides:
                self.corners.append((("T", tid, pr), ("tet", tid, pr)))
            self.corners.append((("T", tid, bottom), ("tet", tid, bottom)))
            self.corners.append((("T", tid, top), ("tet", tid, top)))
            for v in (1, 2, 3, 4):
                if v in bottom:
                    self.faces.setdefault(("S", rid, i, v), []).append(("tet", tid))
                else:
                    self.faces.setdefault(("S", rid, i - 1, v), []).append(("tet", tid))

    def run_layers(self, rid, path, start, stop, match):
        """Build layers start..stop (inclusive) beginning from matchings on triangle start-1."""
        history = {start - 1: dict(match)}
        for i in range(start, stop + 1):
            before = history[i - 1]
            after = dict(before)
            removed = path.dropped[i - 1]
            after[path.opposite[i]] = after.pop(removed)
            self.layer(rid, path, i, before, after)
            history[i] = after
        return history

    def attach_band(self, block: Block, j: int, surface_key, relabel=None):
        relabel = relabel or {v: v for v in (1, 2, 3, 4)}
        for name, edges in block.band_faces(j):
            labels = sorted({x for pr in edges for x in pr})
            omitted = ({1, 2, 3, 4} - set(labels)).pop()
            mapped = {pair(relabel[a], relabel[b]): ("E", block.id, key) for (a, b), key in edges.items()}
            self.attach(surface_key, relabel[omitted], ("block", block.id, name), mapped)


def _bijection(source_slopes, target_matching):
    """Label bijection sending matching source_slopes[x] to target_matching[x] for each slope x."""
    for perm in permutations((1, 2, 3, 4)):
        phi = dict(zip((1, 2, 3, 4), perm))
        if all(
            {pair(phi[a], phi[b]) for a, b in MATCHINGS[src]} == set(MATCHINGS[target_matching[x]])
            for x, src in source_slopes.items()
        ):
            return phi
    raise StructuralError("no label bijection matches the slope data")


def _normalize(n: int) -> GluingMap:
    return shift(-n)


def _port_geometry(p: LinkPresentation, port: Port):
    """(partner port, raw map from this port to partner, partner preferred slope here)."""
    other, g = p.partner(port)
    return other, g, g.inverse()(p.bracelets[other.bracelet].preferred_slope())


def assemble(p: LinkPresentation, check_candidate: bool = True) -> BlockDecomposition:
    verdict = classify(p) if check_candidate else None
    if check_candidate and not isinstance(verdict.verdict, Candidate):
        raise NotCandidate(f"presentation is {verdict.verdict}")
    b = _Builder(p)
    large = [x for x in p.bracelets.values() if not x.is_tangle]
    if not large:
        _assemble_twobridge(b, p)
    else:
        _assemble_blocks(b, p, large)

    classes = {}
    for node, corner in b.corners:
        classes.setdefault(b.uf.find(node), []).append(corner)
    ids = {root: n for n, root in enumerate(sorted(classes, key=repr))}
    numbered = {ids[root]: corners for root, corners in classes.items()}
    for tet in b.tets:
        for x in tet.vertices:
            for y in tet.vertices:
                if x < y:
                    tet.classes[(x, y)] = ids[b.uf.find(("T", tet.id, (x, y)))]
    block_classes = {}
    for blk in b.blocks.values():
        block_classes[blk.id] = {key: ids[b.uf.find(("E", blk.id, key))] for key in blk.edge_keys()}
    decomp = BlockDecomposition(p, b.blocks, b.regions, b.tets, numbered, b.faces, b.folded)
    decomp.block_classes = block_classes
    if verdict is not None:
        decomp.montesinos = verdict.verdict.montesinos
    return decomp


def _assemble_twobridge(b: _Builder, p: LinkPresentation):
    (g,) = p.gluings
    x = p.bracelets[g.first.bracelet]
    y = p.bracelets[g.second.bracelet]
    s, t = g.map(x.tangle_slope), y.tangle_slope
    path = farey_path(s, t)
    m = path.m
    if m < 3:
        raise SlopeTooClose("2-bridge tangles closer than Farey distance 3")
    rid = "r0"
    right, left = path.edges[1]
    match = {path.opposite[1]: GAMMA, right: DESCENDING, left: ASCENDING}
    b.run_layers(rid, path, 2, m - 1, match)
    history_last = _matching_at(path, match, 1, m - 1)
    b.fold((rid, 1), match[path.opposite[1]])
    b.fold((rid, m - 1), history_last[path.dropped[m - 1]])
    b.regions[rid] = Region(rid, "twobridge", path, layers=tuple(range(2, m)), folds=(1, m - 1), surfaces=tuple(range(1, m)))


def _matching_at(path, match, start, stop):
    cur = dict(match)
    for i in range(start + 1, stop + 1):
        removed = path.dropped[i - 1]
        cur[path.opposite[i]] = cur.pop(removed)
    return cur


def _assemble_blocks(b: _Builder, p: LinkPresentation, large):
    # first pass: decide port contexts and shifts
    contexts = {x.id: [None] * x.degree for x in large}
    region_no = 0
    for g in p.gluings:
        x = p.bracelets[g.first.bracelet]
        y = p.bracelets[g.second.bracelet]
        if x.is_tangle and y.is_tangle:
            raise StructuralError("two tangles inside a larger tree")
        rid = f"r{region_no}"
        region_no += 1
        if x.is_tangle or y.is_tangle:
            blk, port, tangle_port = (y, g.second, g.first) if x.is_tangle else (x, g.first, g.second)
            _, _, s = _port_geometry(p, port)
            w = wedge(s, INF)
            if w < 2:
                raise SlopeTooClose(f"tangle at {port} is adjacent to the preferred slope")
            n = floor(s.value)
            contexts[blk.id][port.index] = PortContext("tangle", n, rid, "near", w)
            b.regions[rid] = Region(rid, "tangle", None, near=(blk.id, port.index), far=(tangle_port.bracelet, 0))
            continue
        _, gmap, s_in_x = _port_geometry(p, g.first)
        w = wedge(s_in_x, INF)
        if w == 0:
            raise SlopeTooClose("large bracelets glued along equal slopes")
        s_in_y = gmap(INF)
        if w == 1:
            n = s_in_x.numer
            sigma_raw = slope_reduce(n + 1, 1)
            sigma_y = gmap(sigma_raw)
            n_y = s_in_y.numer
            if sigma_y.numer == n_y + 1:
                ctx_y = PortContext("direct", n_y, rid, "far", 1, virtual="A")
            else:
                ctx_y = PortContext("direct", n_y - 1, rid, "far", 1, virtual="B")
            contexts[x.id][g.first.index] = PortContext("direct", n, rid, "near", 1, virtual="A")
            contexts[y.id][g.second.index] = ctx_y
            b.regions[rid] = Region(rid, "direct", None, near=(x.id, g.first.index), far=(y.id, g.second.index))
        else:
            contexts[x.id][g.first.index] = PortContext("product", floor(s_in_x.value), rid, "near", w)
            contexts[y.id][g.second.index] = PortContext("product", floor(s_in_y.value), rid, "far", w)
            b.regions[rid] = Region(rid, "product", None, near=(x.id, g.first.index), far=(y.id, g.second.index))

    for x in large:
        k = x.half_twists - sum(c.shift for c in contexts[x.id])
        b.blocks[x.id] = Block(x.id, x.degree, k, bool(x.augmentation), contexts[x.id])

    for blk in b.blocks.values():
        _add_block_cells(b, blk)

    for rid, region in b.regions.items():
        if region.kind == "tangle":
            _build_tangle(b, p, region)
        elif region.kind == "direct":
            _build_direct(b, p, region)
        else:
            _build_product(b, p, region)


def _add_block_cells(b: _Builder, blk: Block):
    if blk.degree == 0:
        return
    if not blk.augmented:
        for key in blk.edge_keys():
            b.corners.append((("E", blk.id, key), ("block", blk.id, key)))
        return
    # cone every band triangle to the core; local vertex 0 is the core
    for j in range(blk.degree):
        for name, edges in blk.band_faces(j):
            labels = sorted({x for pr in edges for x in pr})
            point = _face_points(blk, name)
            tid = len(b.tets)
            roles = {}
            for (u, v), key in edges.items():
                role = {"V": "G", "H": "B", "D": "A"}[key[0]]
                opposite = [z for z in labels if z not in (u, v)][0]
                roles[(u, v)] = (role, j)
                roles[(0, opposite)] = (role, j)
                b.uf.union(("T", tid, (u, v)), ("E", blk.id, key))
                b.uf.union(("T", tid, (0, opposite)), ("P", blk.id, point[opposite]))
                b.faces.setdefault(("R", blk.id, key), []).append(("tet", tid))
            b.tets.append(Tetrahedron(tid, "cone", None, None, (0,) + tuple(labels), block=blk.id, roles=roles))
            for pr in roles:
                b.corners.append((("T", tid, pr), ("tet", tid, pr)))
            b.cone_faces[(blk.id, name)] = ("tet", tid)


def _face_points(blk: Block, name):
    _, j, h = name
    pts = {
        1: blk.canonical_point(j, 0),
        2: blk.canonical_point(j, 1),
        3: blk.canonical_point(j + 1, 0),
        4: blk.canonical_point(j + 1, 1),
    }
    return pts


def _band_frame(blk: Block, j: int) -> GluingMap:
    return _normalize(blk.ports[j].shift)


def _build_tangle(b: _Builder, p: LinkPresentation, region: Region):
    bid, j = region.near
    blk = b.blocks[bid]
    s = _band_frame(blk, j)(p.transported(Port(bid, j)))
    path = farey_path(INF, s)
    blk.ports[j].path = path
    region.path = path
    m = path.m
    rid = region.id
    match = {INF: GAMMA, path.entry: DESCENDING, path.opposite[0]: ASCENDING}
    _attach_block_band(b, blk, j, (rid, 0))
    if m == 1:
        b.fold((rid, 0), GAMMA)
        region.folds = (0,)
        region.surfaces = (0,)
        return
    history = b.run_layers(rid, path, 1, m - 1, match)
    b.fold((rid, m - 1), history[m - 1][path.dropped[m - 1]])
    region.layers = tuple(range(1, m))
    region.folds = (m - 1,)
    region.surfaces = tuple(range(m))


def _attach_block_band(b: _Builder, blk: Block, j: int, surface_key, relabel=None):
    relabel = relabel or {v: v for v in (1, 2, 3, 4)}
    for name, edges in blk.band_faces(j):
        labels = sorted({x for pr in edges for x in pr})
        omitted = ({1, 2, 3, 4} - set(labels)).pop()
        mapped = {pair(relabel[a], relabel[c]): ("E", blk.id, key) for (a, c), key in edges.items()}
        owner = ("block", blk.id, name)
        if blk.augmented:
            owner = b.cone_faces[(blk.id, name)]
        b.attach(surface_key, relabel[omitted], owner, mapped)


def _far_frames(b: _Builder, p: LinkPresentation, region: Region):
    xb, i = region.near
    yb, j = region.far
    x, y = b.blocks[xb], b.blocks[yb]
    _, gmap = p.partner(Port(xb, i))
    # normalised x-frame -> normalised y-frame
    h = _band_frame(y, j) @ gmap @ _band_frame(x, i).inverse()
    return x, y, i, j, h


def _build_direct(b: _Builder, p: LinkPresentation, region: Region):
    x, y, i, j, h = _far_frames(b, p, region)
    rid = region.id
    hinv = h.inverse()
    # in x's normalised frame: y's crossing slope is 0, the virtual diagonal is 1
    y_slopes = {GAMMA: hinv(INF), DESCENDING: hinv(Slope(0, 1)), ASCENDING: hinv(Slope(1, 1))}
    x_matching = {INF: GAMMA, Slope(0, 1): DESCENDING, Slope(1, 1): ASCENDING}
    target = {mi: x_matching[s] for mi, s in y_slopes.items()}
    phi = _bijection({mi: mi for mi in target}, target)
    _attach_block_band(b, x, i, (rid, 0))
    _attach_block_band(b, y, j, (rid, 0), relabel=phi)
    region.surfaces = (0,)


def _build_product(b: _Builder, p: LinkPresentation, region: Region):
    x, y, i, j, h = _far_frames(b, p, region)
    rid = region.id
    hinv = h.inverse()
    target_slope = hinv(INF)
    exit_slope = hinv(Slope(0, 1))
    path = farey_path(INF, target_slope, entry=Slope(0, 1), exit=exit_slope)
    region.path = path
    x.ports[i].path = path
    y.ports[j].path = path
    m = path.m
    match = {INF: GAMMA, Slope(0, 1): DESCENDING, Slope(1, 1): ASCENDING}
    _attach_block_band(b, x, i, (rid, 0))
    history = b.run_layers(rid, path, 1, m, match)
    last = history[m]
    y_slopes = {GAMMA: target_slope, DESCENDING: exit_slope, ASCENDING: hinv(Slope(1, 1))}
    target = {mi: last[s] for mi, s in y_slopes.items()}
    phi = _bijection({mi: mi for mi in target}, target)
    _attach_block_band(b, y, j, (rid, m), relabel=phi)
    region.layers = tuple(range(1, m + 1))
    region.surfaces = tuple(range(m + 1))


# --- standalone pieces ---------------------------------------------------------------

@dataclass
class TetrahedronLayer:
    index: int
    edge: tuple  # path.edges[index] as (right end, left end)
    letters: str  # letters of triangles index-1 and index
    tetrahedra: tuple


@dataclass
class FoldRecord:
    surface: int
    slope: Slope  # the slope whose arcs are folded onto each other


def build_block(b, contexts) -> Block:
    from .classifier import NotLarge

    if not b.is_large:
        raise NotLarge(f"bracelet {b.id} is not large")
    contexts = list(contexts)
    if len(contexts) != b.degree:
        raise ValueError("one context per port is required")
    k = b.half_twists - sum(c.shift for c in contexts)
    return Block(b.id, b.degree, k, bool(b.augmentation), contexts)


def _layers_from(builder: _Builder, path: FareyPath, rid: str):
    by_layer = {}
    for tet in builder.tets:
        by_layer.setdefault(tet.layer, []).append(tet)
    return [
        TetrahedronLayer(i, path.edges[i], path.word[i - 1 : i + 1], tuple(by_layer[i]))
        for i in sorted(by_layer)
    ]


def build_product_region(path: FareyPath) -> list:
    """Two tetrahedra per crossed Farey edge 1..m; empty for a direct gluing."""
    if path.m == 0:
        return []
    b = _Builder(None)
    match = {path.source: GAMMA, path.entry: DESCENDING, path.opposite[0]: ASCENDING}
    b.run_layers("product", path, 1, path.m, match)
    return _layers_from(b, path, "product")


def build_tangle_region(path: FareyPath):
    """Layers 1..m-1 and the fold of the last pleated surface onto itself."""
    if wedge(path.source, path.target) <= 1:
        raise SlopeTooClose("a trivial tangle needs Farey distance at least 2")
    m = path.m
    if m == 1:
        return [], FoldRecord(0, path.source)
    b = _Builder(None)
    match = {path.source: GAMMA, path.entry: DESCENDING, path.opposite[0]: ASCENDING}
    b.run_layers("tangle", path, 1, m - 1, match)
    return _layers_from(b, path, "tangle"), FoldRecord(m - 1, path.dropped[m - 1])


def build_augmented_cone(block: Block) -> list:
    if not block.augmented:
        raise NotAugmented(f"block {block.id} is not augmented")
    b = _Builder(None)
    _add_block_cells(b, block)
    return list(b.tets)


# --- export --------------------------------------------------------------------------

SCHEMA = "arborhyp/1"


def _key_str(key):
    return f"{key[0]}{key[1]},{key[2]}"


def to_json(decomp: BlockDecomposition) -> dict:
    tets = []
    for tet in decomp.tetrahedra:
        entry = {
            "id": tet.id,
            "kind": tet.kind,
            "vertices": list(tet.vertices),
            "edge_classes": {f"{x}{y}": cid for (x, y), cid in sorted(tet.classes.items())},
        }
        if tet.kind == "layer":
            entry["region"] = tet.region
            entry["layer"] = tet.layer
            entry["diagonals"] = [list(p) for p in tet.diagonals]
        else:
            entry["block"] = tet.block
        tets.append(entry)
    blocks = []
    for blk in decomp.blocks.values():
        blocks.append(
            {
                "id": blk.id,
                "degree": blk.degree,
                "twists": blk.twists,
                "augmented": blk.augmented,
                "bands": [
                    {
                        "kind": ctx.kind,
                        "subdivision": "square" if ctx.kind == "direct" else "triangles",
                        "region": ctx.region,
                        "wedge": ctx.wedge,
                        # which diagonal family carries zero angle in a square band
                        "virtual_diagonal": ctx.virtual,
                    }
                    for ctx in blk.ports
                ],
                "edge_classes": {_key_str(k): v for k, v in decomp.block_classes[blk.id].items()},
            }
        )
    regions = []
    for r in decomp.regions.values():
        regions.append(
            {
                "id": r.id,
                "kind": r.kind,
                "m": r.path.m if r.path is not None else 0,
                "word": r.path.word if r.path is not None else "",
                "layers": list(r.layers),
                "folds": list(r.folds),
            }
        )
    classes = [
        {"id": cid, "corners": [_corner_str(c) for c in corners]}
        for cid, corners in sorted(decomp.classes.items())
    ]
    return {
        "schema": SCHEMA,
        "kind": "decomposition",
        "tetrahedra": tets,
        "blocks": blocks,
        "regions": regions,
        "edge_classes": classes,
        "euler_characteristic": decomp.euler_characteristic(),
    }


def _corner_str(corner):
    if corner[0] == "tet":
        return f"tet {corner[1]} edge {corner[2][0]}{corner[2][1]}"
    return f"block {corner[1]} edge {_key_str(corner[2])}"
