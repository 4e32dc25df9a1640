"""Text format for link presentations.

Accepted forms::

    twobridge(5/2)
    montesinos(twists=1; 1/2, 1/3, 1/7)
    pretzel(2, 3, 7)
    tree {
        m = bracelet(d=3, n=0, twists=1);
        t = bracelet(d=1, slope=1/3);
        glue m.0 t.0 [[1,0],[0,1]];
        ...
    }

Slopes are integers, p/q or inf; matrices are row-major and default to the
identity.  '#' starts a comment.  JSON documents are handled by from_json.
"""
from __future__ import annotations

import re

from .errors import ParseError, SemanticError
from .farey import IDENTITY, GluingMap, Slope, as_slope, slope_reduce
from .presentation import Bracelet, LinkPresentation, Port, montesinos, pretzel, twobridge, validate

TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<num>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_~\-]*)"
    r"|(?P<punct>[{}()\[\];,=./])"
)


class _Tokens:
    def __init__(self, text: str):
        self.items = []
        line, col, pos = 1, 1, 0
        while pos < len(text):
            m = TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup
            value = m.group()
            if kind == "nl":
                line, col = line + 1, 1
            else:
                if kind not in ("ws", "comment"):
                    self.items.append((kind, value, line, col))
                col += len(value)
            pos = m.end()
        self.i = 0
        self.end = (line, col)

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("eof", "", *self.end)

    def take(self, value=None, kind=None):
        tok = self.peek()
        if tok[0] == "eof":
            raise ParseError(f"unexpected end of input, expected {value or kind}", tok[2], tok[3])
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def accept(self, value):
        if self.peek()[1] == value:
            self.i += 1
            return True
        return False


def _int(toks) -> int:
    return int(toks.take(kind="num")[1])


def _slope(toks) -> Slope:
    tok = toks.peek()
    if tok[0] == "name" and tok[1] == "inf":
        toks.take()
        return slope_reduce(1, 0)
    p = _int(toks)
    if toks.accept("/"):
        q_tok = toks.peek()
        q = _int(toks)
        if p == 0 and q == 0:
            raise ParseError("0/0 is not a slope", q_tok[2], q_tok[3])
        return slope_reduce(p, q)
    return Slope(p, 1)


def _matrix(toks) -> GluingMap:
    toks.take("[")
    rows = []
    for r in range(2):
        if r:
            toks.take(",")
        toks.take("[")
        x = _int(toks)
        toks.take(",")
        y = _int(toks)
        toks.take("]")
        rows.append((x, y))
    toks.take("]")
    return GluingMap.from_rows(rows)


def _port(toks) -> Port:
    name = toks.take(kind="name")[1]
    toks.take(".")
    return Port(name, _int(toks))


def _tree(toks) -> LinkPresentation:
    p = LinkPresentation()
    toks.take("{")
    while not toks.accept("}"):
        tok = toks.peek()
        if tok[1] == "glue":
            toks.take()
            first = _port(toks)
            second = _port(toks)
            g = _matrix(toks) if toks.peek()[1] == "[" else IDENTITY
            p.glue(first, second, g)
        else:
            name = toks.take(kind="name")[1]
            if name in p.bracelets:
                raise ParseError(f"bracelet {name} defined twice", tok[2], tok[3])
            toks.take("=")
            toks.take("bracelet")
            toks.take("(")
            fields = {}
            while not toks.accept(")"):
                key_tok = toks.take(kind="name")
                key = key_tok[1]
                toks.take("=")
                if key == "slope":
                    fields[key] = _slope(toks)
                elif key in ("d", "n", "twists"):
                    fields[key] = _int(toks)
                else:
                    raise ParseError(f"unknown bracelet field {key}", key_tok[2], key_tok[3])
                if not toks.accept(","):
                    toks.take(")")
                    break
            if "d" not in fields:
                raise ParseError(f"bracelet {name} needs d=", tok[2], tok[3])
            p.add(Bracelet(name, fields["d"], fields.get("n", 0), fields.get("twists", 0), fields.get("slope")))
        toks.take(";")
    return p


def parse(text: str, check: bool = True) -> LinkPresentation:
    toks = _Tokens(text)
    head = toks.take(kind="name")
    kind = head[1]
    if kind == "twobridge":
        toks.take("(")
        s = _slope(toks)
        toks.take(")")
        p = twobridge(s)
    elif kind == "pretzel":
        toks.take("(")
        cols = [_int(toks)]
        while toks.accept(","):
            cols.append(_int(toks))
        toks.take(")")
        if 0 in cols:
            raise ParseError("pretzel columns must be nonzero", head[2], head[3])
        p = pretzel(*cols)
    elif kind == "montesinos":
        toks.take("(")
        toks.take("twists")
        toks.take("=")
        k = _int(toks)
        toks.take(";")
        slopes = [_slope(toks)]
        while toks.accept(","):
            slopes.append(_slope(toks))
        toks.take(")")
        p = montesinos(k, slopes)
    elif kind == "tree":
        p = _tree(toks)
    else:
        raise ParseError(f"unknown form {kind!r}", head[2], head[3])
    tail = toks.peek()
    if tail[0] != "eof":
        raise ParseError(f"trailing input {tail[1]!r}", tail[2], tail[3])
    if check:
        problems = validate(p)
        if problems:
            raise SemanticError("; ".join(problems))
    return p


def emit(p: LinkPresentation) -> str:
    lines = ["tree {"]
    for b in p.bracelets.values():
        fields = [f"d={b.degree}"]
        if b.augmentation:
            fields.append(f"n={b.augmentation}")
        if b.half_twists:
            fields.append(f"twists={b.half_twists}")
        if b.tangle_slope is not None:
            fields.append(f"slope={b.tangle_slope}")
        lines.append(f"    {b.id} = bracelet({', '.join(fields)});")
    for g in p.gluings:
        lines.append(f"    glue {g.first} {g.second} {g.map};")
    lines.append("}")
    return "\n".join(lines)


# --- JSON ---------------------------------------------------------------------------

def to_json(p: LinkPresentation) -> dict:
    return {
        "schema": "arborhyp/1",
        "bracelets": [
            {
                "id": b.id,
                "d": b.degree,
                "n": b.augmentation,
                "half_twists": b.half_twists,
                "tangle_slope": None if b.tangle_slope is None else str(b.tangle_slope),
            }
            for b in p.bracelets.values()
        ],
        "gluings": [
            {"ports": [[g.first.bracelet, g.first.index], [g.second.bracelet, g.second.index]], "map": g.map.rows}
            for g in p.gluings
        ],
    }


def from_json(doc: dict, check: bool = True) -> LinkPresentation:
    p = LinkPresentation()
    try:
        for b in doc["bracelets"]:
            slope = b.get("tangle_slope")
            p.add(
                Bracelet(
                    str(b["id"]),
                    int(b["d"]),
                    int(b.get("n", 0)),
                    int(b.get("half_twists", 0)),
                    None if slope is None else as_slope(slope),
                )
            )
        for g in doc["gluings"]:
            (x, i), (y, j) = g["ports"]
            m = GluingMap.from_rows(g["map"]) if "map" in g else IDENTITY
            p.glue(Port(str(x), int(i)), Port(str(y), int(j)), m)
    except (KeyError, TypeError, ValueError) as exc:
        raise SemanticError(f"malformed JSON presentation: {exc}")
    if check:
        problems = validate(p)
        if problems:
            raise SemanticError("; ".join(problems))
    return p
