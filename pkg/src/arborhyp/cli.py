"""Command line entry point: arborhyp {reduce,classify,decompose,angles,verify} INPUT."""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .angles import AssignmentFailed, assign, assignment_from_json, certificate
from .classifier import classify
from .decomposer import assemble, to_json as decomposition_json
from .dsl import emit, from_json, parse, to_json as presentation_json
from .errors import ArborError
from .reducer import reduce
from .verifier import verify

SCHEMA = "arborhyp/1"
EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def load(text: str):
    """Return ('presentation', p) or ('certificate', doc)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        if doc.get("kind") == "certificate":
            return "certificate", doc
        return "presentation", from_json(doc)
    return "presentation", parse(stripped)


def _q(x: Fraction):
    return [x.numerator, x.denominator]


def _verdict_json(c):
    v = c.verdict
    out = {"kind": c.kind, "text": str(v), "hyperbolic": c.hyperbolic, "notes": list(c.notes)}
    for attr in ("half_twists", "reason", "p", "q", "r", "reflected"):
        if hasattr(v, attr):
            out[attr] = getattr(v, attr)
    return out


def report_json(report) -> dict:
    return {
        "ok": report.ok,
        "edge_sums_ok": report.edge_sum_ok,
        "bad_edge_classes": [[cid, _q(total)] for cid, total in report.bad_classes],
        "tetrahedra_ok": report.tetrahedra_ok,
        "bad_tetrahedra": [str(t) for t in report.bad_tetrahedra],
        "structural": list(report.structural),
        "blocks": [
            {
                "id": r.block,
                "ok": r.ok,
                "local": r.local_ok,
                "vertex_sums": r.vertex_ok,
                "bending": r.bending_ok,
                "min_bending": None if r.min_bending is None else _q(r.min_bending),
                "witness_length": None if r.witness is None else len(r.witness),
                "notes": list(r.notes),
            }
            for r in report.block_reports
        ],
    }


def _summands(p, drop_trivial: bool):
    result = reduce(p)
    out = []
    for s in result.summands:
        c = classify(s)
        if drop_trivial and c.kind == "Unknot":
            continue
        out.append((s, c))
    return result, out


def _fmt_pi(x: Fraction) -> str:
    if x == 0:
        return "0"
    if x == 1:
        return "pi"
    return f"{x}pi" if x.denominator == 1 else f"{x.numerator}pi/{x.denominator}"


def cmd_reduce(p, args, out):
    result, summands = _summands(p, args.drop_trivial_summands)
    if args.json:
        doc = {
            "schema": SCHEMA,
            "command": "reduce",
            "trace": [list(t) for t in result.trace],
            "summands": [{"presentation": presentation_json(s), "classification": _verdict_json(c)} for s, c in summands],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    for step, text in result.trace:
        out.write(f"step {step}: {text}\n")
    for n, (s, c) in enumerate(summands, 1):
        out.write(f"summand {n}: {c.verdict}\n{emit(s)}\n")
    return EXIT_OK


def cmd_classify(p, args, out):
    _, summands = _summands(p, args.drop_trivial_summands)
    if args.json:
        doc = {"schema": SCHEMA, "command": "classify", "summands": [_verdict_json(c) for _, c in summands]}
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    if len(summands) == 1:
        out.write(f"{summands[0][1].verdict}\n")
    else:
        for n, (_, c) in enumerate(summands, 1):
            out.write(f"summand {n}: {c.verdict}\n")
    return EXIT_OK


def _candidates(p, args, out):
    _, summands = _summands(p, args.drop_trivial_summands)
    found = [(s, c) for s, c in summands if c.hyperbolic]
    for s, c in summands:
        if not c.hyperbolic and not args.json:
            out.write(f"skipping summand: {c.verdict}\n")
    return summands, found


def cmd_decompose(p, args, out):
    summands, found = _candidates(p, args, out)
    docs = []
    for s, _ in found:
        d = assemble(s)
        docs.append(decomposition_json(d))
        if not args.json:
            out.write(
                f"{len(d.blocks)} blocks, {len(d.regions)} regions, {len(d.tetrahedra)} tetrahedra, "
                f"{d.edge_count} edge classes, audit {'ok' if not d.audit() else d.audit()}\n"
            )
            for r in d.regions.values():
                m = r.path.m if r.path is not None else 0
                out.write(f"  region {r.id}: {r.kind}, m = {m}, layers {list(r.layers)}, folds {list(r.folds)}\n")
    if args.json:
        out.write(json.dumps({"schema": SCHEMA, "command": "decompose", "decompositions": docs}, indent=2) + "\n")
    return EXIT_OK if found and len(found) == len(summands) else EXIT_FAIL


def cmd_angles(p, args, out):
    summands, found = _candidates(p, args, out)
    certs, ok = [], bool(found) and len(found) == len(summands)
    for s, _ in found:
        d = assemble(s)
        a = assign(d, args.epsilon)
        rep = verify(d, a, oracle=args.oracle)
        ok = ok and rep.ok
        cert = certificate(d, a)
        cert["verification"] = report_json(rep)
        certs.append(cert)
        if not args.json:
            out.write(f"epsilon = {_fmt_pi(a.epsilon)}; verification {'passed' if rep.ok else 'FAILED'}\n")
            for bid, band in a.bands.items():
                pairs = ", ".join(f"({_fmt_pi(x)}, {_fmt_pi(y)})" for x, y in zip(band.a, band.b))
                out.write(f"  block {bid}: (a, b) = {pairs}  [{a.routes.get(bid, '')}]\n")
            for rid, w in a.w.items():
                vals = ", ".join("-" if x is None else _fmt_pi(x) for x in w)
                out.write(f"  region {rid}: w = ({vals})  [{a.routes.get(rid, '')}]\n")
            for tid, tri in enumerate(a.triples):
                out.write(f"  tetrahedron {tid}: ({', '.join(_fmt_pi(x) for x in tri)})\n")
    if args.json:
        doc = certs[0] if len(certs) == 1 else {"schema": SCHEMA, "command": "angles", "certificates": certs}
        out.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def verify_certificate(doc, oracle=False):
    p = from_json(doc["presentation"])
    d = assemble(p)
    a = assignment_from_json(doc)
    return verify(d, a, oracle=oracle)


def cmd_verify(kind, obj, args, out):
    reports = []
    if kind == "certificate":
        certs = [obj]
    elif obj.get("certificates") if isinstance(obj, dict) else False:
        certs = obj["certificates"]
    else:
        certs = None
    if certs is not None:
        for cert in certs:
            reports.append(verify_certificate(cert, args.oracle))
    else:
        summands, found = _candidates(obj, args, out)
        for s, _ in found:
            d = assemble(s)
            reports.append(verify(d, assign(d, args.epsilon), oracle=args.oracle))
        if len(found) != len(summands):
            reports.append(None)
    ok = bool(reports) and all(r is not None and r.ok for r in reports)
    if args.json:
        doc = {"schema": SCHEMA, "command": "verify", "ok": ok, "reports": [report_json(r) for r in reports if r]}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for r in reports:
            if r is None:
                out.write("non-candidate summand: nothing to verify\n")
                continue
            out.write(f"edge sums {'ok' if r.edge_sum_ok else 'FAILED ' + str(r.bad_classes)}\n")
            out.write(f"tetrahedra {'ok' if r.tetrahedra_ok else 'FAILED ' + str(r.bad_tetrahedra)}\n")
            for b in r.block_reports:
                value = "" if b.min_bending is None else f", min bending {_fmt_pi(b.min_bending)}"
                out.write(f"block {b.block}: {'ok' if b.ok else 'FAILED'}{value}\n")
        out.write("PASS\n" if ok else "FAIL\n")
    return EXIT_OK if ok else EXIT_FAIL


# --- tree drawings -----------------------------------------------------------------

def _label(b):
    if b.is_tangle:
        return f"{b.id}\\nslope {b.tangle_slope}"
    aug = f", n={b.augmentation}" if b.augmentation else ""
    return f"{b.id}\\nd={b.degree}{aug}, k={b.half_twists}"


def tree_dot(p) -> str:
    lines = ["graph presentation {", "  node [shape=box];"]
    for b in p.bracelets.values():
        shape = "ellipse" if b.is_tangle else "box"
        lines.append(f'  "{b.id}" [label="{_label(b)}", shape={shape}];')
    for g in p.gluings:
        lines.append(f'  "{g.first.bracelet}" -- "{g.second.bracelet}" [label="{g.first.index}:{g.second.index} {g.map}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_svg(p) -> str:
    import math
    from html import escape

    ids = list(p.bracelets)
    n = len(ids)
    size, radius = 480, 180
    pos = {
        bid: (size / 2 + radius * math.cos(2 * math.pi * i / max(n, 1)), size / 2 + radius * math.sin(2 * math.pi * i / max(n, 1)))
        for i, bid in enumerate(ids)
    }
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" font-family="monospace" font-size="11">']
    for g in p.gluings:
        (x1, y1), (x2, y2) = pos[g.first.bracelet], pos[g.second.bracelet]
        parts.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="black"/>')
        parts.append(f'<text x="{(x1 + x2) / 2:.1f}" y="{(y1 + y2) / 2:.1f}">{escape(str(g.map))}</text>')
    for bid, (x, y) in pos.items():
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="26" fill="white" stroke="black"/>')
        for row, text in enumerate(_label(p.bracelets[bid]).split("\\n")):
            parts.append(f'<text x="{x:.1f}" y="{y - 2 + 12 * row:.1f}" text-anchor="middle">{escape(text)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arborhyp", description="Hyperbolicity certificates for arborescent links.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("reduce", "simplify the bracelet tree and split connected sums"),
        ("classify", "report hyperbolic / non-hyperbolic family for each summand"),
        ("decompose", "build the block decomposition of each candidate summand"),
        ("angles", "construct and check an exact angle structure"),
        ("verify", "check a certificate (or build and check one)"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("input", help="DSL text, JSON document, a file path, or - for stdin")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--epsilon", type=Fraction, default=None, help="starting epsilon, a rational multiple of pi")
        sp.add_argument("--drop-trivial-summands", action="store_true", help="omit unknot summands")
        sp.add_argument("--emit-tree", choices=("dot", "svg"), help="print the bracelet tree instead")
        sp.add_argument("--oracle", action="store_true", help="cross-check bending minima by brute force")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        kind, obj = load(_read_input(args.input))
        if args.emit_tree:
            p = from_json(obj["presentation"]) if kind == "certificate" else obj
            out.write(tree_dot(p) if args.emit_tree == "dot" else tree_svg(p))
            return EXIT_OK
        if args.command == "verify":
            return cmd_verify(kind, obj, args, out)
        if kind == "certificate":
            obj = from_json(obj["presentation"])
        handler = {"reduce": cmd_reduce, "classify": cmd_classify, "decompose": cmd_decompose, "angles": cmd_angles}
        return handler[args.command](obj, args, out)
    except AssignmentFailed as exc:
        print(f"error: angle construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ArborError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
