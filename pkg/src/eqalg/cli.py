"""Command line interface: ``eqalg <command> [--json] ...``.

Exit codes: 0 ok, 2 malformed input, 3 validation failure, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import burnside, indexing, mackey, normed_alg, serialize, spans
from .group import GroupError, MalformedSpec, OrderCapExceeded
from .gsets import GroupMismatch, MismatchedTarget, NotEquivariant

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_CAP = 0, 2, 3, 4


class Failure(Exception):
    """Raised by commands to exit with ``code`` after printing ``payload``."""

    def __init__(self, code: int, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _q(x) -> str:
    return str(Fraction(x))


def _aligned(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))] if rows else []
    return "\n".join("  ".join(s.rjust(w) for s, w in zip(r, widths)) for r in rows)


def _load(path: str, kind: str) -> serialize.Loaded:
    loaded = serialize.load(path)
    if loaded.kind != kind:
        raise serialize.MalformedFile(f"{path}: expected a {kind} file, got {loaded.kind}")
    return loaded


# commands

def cmd_marks(args) -> tuple[dict, str]:
    g = _load(args.group, "group").obj
    table = [list(r) for r in burnside._marks_table(g)]
    idem = [[_q(c) for c in e.coeffs] for e in burnside.rational_idempotents(g)]
    data = {"marks": table, "idempotents": idem,
            "class_orders": [c.representative.order for c in g.conjugacy_classes()]}
    labels = [f"G/H_{i}" for i in range(len(table))]
    rows = [[""] + [f"H_{j}" for j in range(len(table))]]
    rows += [[labels[i]] + [str(x) for x in r] for i, r in enumerate(table)]
    lines = ["table of marks:", _aligned(rows), "", "idempotents:"]
    for i, e in enumerate(burnside.rational_idempotents(g)):
        lines.append(f"  e_{i} = {_burnside_text(e)}")
    return data, "\n".join(lines)


def _burnside_text(e) -> str:
    out = ""
    for i, c in enumerate(e.coeffs):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        out += f" {sign} {mag}[G/H_{i}]" if out else f"{'-' if c < 0 else ''}{mag}[G/H_{i}]"
    return out or "0"


def cmd_transfer_systems(args) -> tuple[dict, str]:
    g = _load(args.group, "group").obj
    if args.count:
        n = indexing.count_transfer_systems(g)
        return {"count": n}, str(n)
    systems = indexing.enumerate_transfer_systems(g)
    if args.dot:
        dot = indexing.hasse_dot(systems)
        return {"dot": dot}, dot.rstrip("\n")
    listing = [serialize.transfer_pairs(t) for t in systems]
    text = "\n".join(f"{n}: {json.dumps(p)}" for n, p in enumerate(listing))
    return {"count": len(listing), "systems": listing}, text


def cmd_split(args) -> tuple[dict, str]:
    m = _load(args.mackey, "mackey").obj
    report = mackey.check_axioms(m)
    if not report.ok:
        raise Failure(EXIT_INVALID, "Mackey axioms fail",
                      {"failures": [_failure_json(f) for f in report.failures]})
    pieces = []
    lines = []
    for cls, piece in mackey.split(m):
        phi = mackey.geometric_fixed_points(m, cls)
        pieces.append({
            "class": cls.index, "order": cls.representative.order,
            "piece_dims": list(piece.dims), "phi_dim": phi.dim,
            "weyl_order": cls.weyl.order,
            "weyl_action": [[[_q(x) for x in row] for row in a] for a in phi.action]})
        lines.append(f"(H_{cls.index}) |H|={cls.representative.order}: piece dims "
                     f"{list(piece.dims)}, dim Phi = {phi.dim}, |W| = {cls.weyl.order}")
    return {"dims": list(m.dims), "pieces": pieces}, "\n".join(lines)


def _failure_json(f) -> dict:
    kind, *rest = f
    out = {"kind": kind}
    if kind == "double coset":
        d = rest[0]
        out.update({"K": d["K"], "L": d["L"], "H": d["H"], "maps": [list(k) for k in d["maps"]]})
    else:
        out["where"] = [list(x) if isinstance(x, tuple) else x for x in rest]
    return out


def cmd_norm_category(args) -> tuple[dict, str]:
    g = _load(args.group, "group").obj
    t = _load(args.transfer, "transfer_system").obj
    if t.group != g:
        raise GroupMismatch("transfer system belongs to a different group")
    n = indexing.build_norm_category(t)
    homs = [{"source": i, "target": j, "maps": [k[2] for k in n.hom(i, j)]}
            for i in n.objects for j in n.objects if n.hom(i, j)]
    data = {"objects": [f"G/H_{i}" for i in n.objects],
            "morphisms": [list(k) for k in n.morphisms], "homs": homs}
    if args.dot:
        dot = n.to_dot()
        data["dot"] = dot
        return data, dot.rstrip("\n")
    lines = [f"{len(n.objects)} objects, {len(n.morphisms)} morphisms"]
    for h in homs:
        lines.append(f"  G/H_{h['source']} -> G/H_{h['target']}: {len(h['maps'])}")
    return data, "\n".join(lines)


def cmd_validate_diagram(args) -> tuple[dict, str]:
    d = _load(args.diagram, "diagram").obj
    report = normed_alg.validate_diagram(d)
    failures = [{"kind": f.kind, "pair": [list(f.pair[0]), list(f.pair[1])], "detail": f.detail}
                for f in report.failures]
    data = {"ok": report.ok, "checked": report.checked, "failures": failures}
    if not report.ok:
        raise Failure(EXIT_INVALID, f"{len(failures)} failure(s)", data)
    return data, f"ok: {report.checked} checks passed"


# plumbing

def _errors_to_code(exc: BaseException) -> Optional[int]:
    if isinstance(exc, (OrderCapExceeded, spans.HomSetTooLarge, normed_alg.UnboundedSearch)):
        return EXIT_CAP
    if isinstance(exc, (serialize.MalformedFile, MalformedSpec, GroupMismatch,
                        mackey.MalformedMackey)):
        return EXIT_MALFORMED
    if isinstance(exc, (GroupError, indexing.InvalidRelation, indexing.InvalidIndexingSystem,
                        mackey.AxiomFailure, normed_alg.InvalidAlgebra,
                        normed_alg.InvalidAlgebraMap, NotEquivariant, MismatchedTarget,
                        ValueError)):
        return EXIT_INVALID
    return None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    p = argparse.ArgumentParser(prog="eqalg", parents=[common],
                                description="Rational equivariant algebra at desk scale.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("marks", parents=[common], help="table of marks and idempotents")
    s.add_argument("group")
    s.set_defaults(func=cmd_marks)

    s = sub.add_parser("transfer-systems", parents=[common], help="enumerate transfer systems")
    s.add_argument("group")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--list", action="store_true")
    mode.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_transfer_systems)

    s = sub.add_parser("split", parents=[common], help="split a Mackey functor")
    s.add_argument("mackey")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("norm-category", parents=[common], help="export a norm category")
    s.add_argument("group")
    s.add_argument("transfer")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_norm_category)

    s = sub.add_parser("validate-diagram", parents=[common], help="check a normed algebra diagram")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_validate_diagram)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    as_json = getattr(args, "json", False)
    try:
        data, text = args.func(args)
    except Failure as exc:
        if as_json:
            print(serialize.dumps({"error": str(exc), **(exc.payload or {})}), end="")
        else:
            for f in (exc.payload or {}).get("failures", []):
                print("  " + json.dumps(f, sort_keys=True), file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Exception as exc:  # mapped to the exit-code contract below
        code = _errors_to_code(exc)
        if code is None:
            raise
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    if as_json:
        print(serialize.dumps(data), end="")
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
