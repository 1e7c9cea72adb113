"""Canonical JSON files for groups, G-sets, Burnside elements, spans, Mackey
functors, transfer systems and normed algebra diagrams.

Every file is an object with a ``"kind"`` field.  Objects over a group carry
``"group"``, either inline or as a path relative to the file.  Rationals are
written as strings in lowest terms (``"p/q"`` or ``"p"``).  :func:`dumps`
produces the canonical text: sorted keys, two-space indent, trailing newline.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .burnside import BurnsideElement
from .group import FiniteGroup, MalformedSpec, load_group
from .gsets import GMap, GSet
from .indexing import TransferSystem, build_norm_category, pair_orbits
from .mackey import MackeyFunctor, orbit_map_keys
from .normed_alg import AlgebraMap, GradedAlgebra, NormedAlgebraDiagram
from .spans import Span


class MalformedFile(ValueError):
    pass


KINDS = ("group", "gset", "burnside", "span", "mackey", "transfer_system", "diagram")


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def content_hash(doc: dict) -> str:
    return hashlib.sha256(dumps(doc).encode()).hexdigest()


def _q(x) -> str:
    return str(Fraction(x))


def _parse_q(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise MalformedFile(f"rational expected as string or integer, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise MalformedFile(f"bad rational {s!r}") from None


def _matrix(m) -> list:
    return [[_q(x) for x in row] for row in m]


def _parse_matrix(m) -> list:
    if not isinstance(m, list) or any(not isinstance(r, list) for r in m):
        raise MalformedFile("matrix must be a list of rows")
    return [[_parse_q(x) for x in row] for row in m]


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedFile(f"{what} must be an integer")
    return x


def _field(doc: dict, name: str):
    if name not in doc:
        raise MalformedFile(f"missing field {name!r}")
    return doc[name]


# writers

def group_doc(g: FiniteGroup) -> dict:
    return {"kind": "group", "name": g.name, "order": g.order,
            "table": [list(row) for row in g.table]}


def _group_entry(g: FiniteGroup, ref: Optional[str]):
    if ref is not None:
        return ref
    doc = group_doc(g)
    del doc["kind"]
    return doc


def _action(x: GSet) -> list:
    return [list(row) for row in x.action]


def transfer_pairs(t: TransferSystem) -> list[list[int]]:
    """Non-reflexive pairs whose larger subgroup is a class representative."""
    return [list(p) for p in t.generating_pairs()]


def algebra_doc(a: GradedAlgebra) -> dict:
    doc = {"dims": {str(d): n for d, n in a.dims.items()},
           "products": [[i, j, k, _q(q)] for (i, j, k), q in sorted(a.products.items())],
           "unit": [_q(c) for c in a.unit]}
    if a.name:
        doc["name"] = a.name
    if a.differential is not None:
        doc["differential"] = _matrix(a.differential)
    return doc


def to_doc(obj: Any, group_ref: Optional[str] = None) -> dict:
    if isinstance(obj, FiniteGroup):
        return group_doc(obj)
    if isinstance(obj, GSet):
        return {"kind": "gset", "group": _group_entry(obj.group, group_ref),
                "action": _action(obj)}
    if isinstance(obj, BurnsideElement):
        return {"kind": "burnside", "group": _group_entry(obj.group, group_ref),
                "coeffs": [_q(c) for c in obj.coeffs]}
    if isinstance(obj, Span):
        return {"kind": "span", "group": _group_entry(obj.group, group_ref),
                "left": _action(obj.left), "right": _action(obj.right),
                "apex": _action(obj.apex),
                "back": list(obj.back.assignment), "fwd": list(obj.fwd.assignment)}
    if isinstance(obj, MackeyFunctor):
        maps = [{"source": i, "target": j, "point": y,
                 "res": _matrix(obj.res[i, j, y]), "tr": _matrix(obj.tr[i, j, y])}
                for (i, j, y) in sorted(orbit_map_keys(obj.group))]
        return {"kind": "mackey", "group": _group_entry(obj.group, group_ref),
                "dims": list(obj.dims), "maps": maps}
    if isinstance(obj, TransferSystem):
        return {"kind": "transfer_system", "group": _group_entry(obj.group, group_ref),
                "pairs": transfer_pairs(obj)}
    if isinstance(obj, NormedAlgebraDiagram):
        from .indexing import indexing_to_transfer
        n = obj.norm_category
        t = indexing_to_transfer(n.indexing)
        morphisms = []
        for idx, k in enumerate(n.morphisms):
            f = obj.morphisms[k]
            morphisms.append({"index": idx, "blocks": {str(d): _matrix(b)
                                                       for d, b in sorted(f.blocks.items())}})
        return {"kind": "diagram", "group": _group_entry(obj.group, group_ref),
                "transfer_pairs": transfer_pairs(t),
                "objects": [algebra_doc(obj.objects[i]) for i in n.objects],
                "morphisms": morphisms}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# readers

@dataclass
class Loaded:
    kind: str
    obj: Any
    group_ref: Optional[str] = None
    path: Optional[Path] = None

    def doc(self) -> dict:
        return to_doc(self.obj, self.group_ref)


def _read_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: invalid JSON: {exc}") from None


def _load_group_entry(entry, base: Optional[Path]) -> tuple[FiniteGroup, Optional[str]]:
    if isinstance(entry, str):
        path = (base or Path(".")) / entry
        doc = _read_json(path)
        if not isinstance(doc, dict) or doc.get("kind", "group") != "group":
            raise MalformedFile(f"{entry} is not a group file")
        return _parse_group(doc), entry
    if isinstance(entry, dict):
        return _parse_group(entry), None
    raise MalformedFile("group must be an inline object or a path")


def _parse_group(doc: dict) -> FiniteGroup:
    doc = {k: v for k, v in doc.items() if k != "kind"}
    try:
        return load_group(doc)
    except MalformedSpec as exc:
        raise MalformedFile(str(exc)) from None


def _parse_action(g: FiniteGroup, rows) -> GSet:
    if (not isinstance(rows, list) or len(rows) != g.order
            or any(not isinstance(r, list) for r in rows)):
        raise MalformedFile("action must have one row per group element")
    return GSet(g, [[_int(x, "action entry") for x in r] for r in rows], check=True)


def parse_algebra(doc: dict) -> GradedAlgebra:
    if not isinstance(doc, dict):
        raise MalformedFile("algebra must be an object")
    dims = _field(doc, "dims")
    if not isinstance(dims, dict):
        raise MalformedFile("dims must map degrees to dimensions")
    try:
        dims = {int(d): _int(n, "dimension") for d, n in dims.items()}
    except ValueError:
        raise MalformedFile("degrees must be integers") from None
    products = {}
    for t in _field(doc, "products"):
        if not isinstance(t, list) or len(t) != 4:
            raise MalformedFile("structure constants are [i, j, k, q]")
        products[_int(t[0], "i"), _int(t[1], "j"), _int(t[2], "k")] = _parse_q(t[3])
    unit = [_parse_q(c) for c in _field(doc, "unit")]
    diff = doc.get("differential")
    diff = None if diff is None else _parse_matrix(diff)
    # validation is the caller's business so that a bad algebra reports, not crashes
    return GradedAlgebra(dims, products, unit, differential=diff,
                         name=doc.get("name", ""), check=False)


def _transfer_from_pairs(g: FiniteGroup, pairs) -> TransferSystem:
    if not isinstance(pairs, list):
        raise MalformedFile("pairs must be a list")
    n = len(g._subgroup_members)
    rel = set((i, i) for i in range(n))
    where = {p: orb for orb in pair_orbits(g) for p in orb}
    for p in pairs:
        if not isinstance(p, list) or len(p) != 2:
            raise MalformedFile("each pair is [k, h]")
        k, h = _int(p[0], "pair entry"), _int(p[1], "pair entry")
        if not (0 <= k < n and 0 <= h < n):
            raise MalformedFile(f"subgroup index out of range in {p}")
        rel.update(where.get((k, h), [(k, h)]))
    # validated by the TransferSystem constructor (InvalidRelation on failure)
    return TransferSystem(g, frozenset(rel))


def from_doc(doc: Any, base: Optional[Path] = None) -> Loaded:
    if not isinstance(doc, dict):
        raise MalformedFile("top level must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise MalformedFile(f"unknown kind {kind!r}")
    if kind == "group":
        return Loaded(kind, _parse_group(doc))
    g, ref = _load_group_entry(_field(doc, "group"), base)
    if kind == "gset":
        return Loaded(kind, _parse_action(g, _field(doc, "action")), ref)
    if kind == "burnside":
        coeffs = [_parse_q(c) for c in _field(doc, "coeffs")]
        if len(coeffs) != len(g.conjugacy_classes()):
            raise MalformedFile("one coefficient per subgroup class is required")
        return Loaded(kind, BurnsideElement(g, tuple(coeffs)), ref)
    if kind == "span":
        left = _parse_action(g, _field(doc, "left"))
        right = _parse_action(g, _field(doc, "right"))
        apex = _parse_action(g, _field(doc, "apex"))
        back = [_int(x, "leg entry") for x in _field(doc, "back")]
        fwd = [_int(x, "leg entry") for x in _field(doc, "fwd")]
        return Loaded(kind, Span(GMap(apex, left, back), GMap(apex, right, fwd)), ref)
    if kind == "mackey":
        return Loaded(kind, _parse_mackey(g, doc), ref)
    if kind == "transfer_system":
        return Loaded(kind, _transfer_from_pairs(g, _field(doc, "pairs")), ref)
    return Loaded(kind, _parse_diagram(g, doc), ref)


def _parse_mackey(g: FiniteGroup, doc: dict) -> MackeyFunctor:
    from .mackey import MalformedMackey
    dims = [_int(d, "dimension") for d in _field(doc, "dims")]
    res, tr = {}, {}
    for entry in _field(doc, "maps"):
        if not isinstance(entry, dict):
            raise MalformedFile("each map entry is an object")
        key = tuple(_int(_field(entry, f), f) for f in ("source", "target", "point"))
        if key in res:
            raise MalformedFile(f"map {key} listed twice")
        res[key] = _parse_matrix(_field(entry, "res"))
        tr[key] = _parse_matrix(_field(entry, "tr"))
    try:
        return MackeyFunctor(g, tuple(dims), res, tr)
    except MalformedMackey as exc:
        raise MalformedFile(str(exc)) from None


def _parse_diagram(g: FiniteGroup, doc: dict) -> NormedAlgebraDiagram:
    t = _transfer_from_pairs(g, _field(doc, "transfer_pairs"))
    n = build_norm_category(t)
    objects = [parse_algebra(a) for a in _field(doc, "objects")]
    if len(objects) != len(n.objects):
        raise MalformedFile("one algebra per subgroup class is required")
    morphisms = {}
    for entry in _field(doc, "morphisms"):
        idx = _int(_field(entry, "index"), "index")
        if not 0 <= idx < len(n.morphisms):
            raise MalformedFile(f"morphism index {idx} out of range")
        key = n.morphisms[idx]
        blocks = _field(entry, "blocks")
        if not isinstance(blocks, dict):
            raise MalformedFile("blocks must map degrees to matrices")
        try:
            blocks = {int(d): _parse_matrix(b) for d, b in blocks.items()}
            morphisms[key] = AlgebraMap(objects[key[0]], objects[key[1]], blocks)
        except ValueError as exc:
            raise MalformedFile(f"morphism {idx}: {exc}") from None
    return NormedAlgebraDiagram(n, dict(enumerate(objects)), morphisms)


def load(path: str | Path) -> Loaded:
    path = Path(path)
    out = from_doc(_read_json(path), path.parent)
    out.path = path
    return out


def save(path: str | Path, obj: Any, group_ref: Optional[str] = None) -> str:
    text = dumps(to_doc(obj, group_ref))
    Path(path).write_text(text)
    return text


def roundtrip(path: str | Path) -> str:
    """Canonical text of a file after parsing it."""
    return dumps(load(path).doc())


# workspace

@dataclass
class Workspace:
    """Loaded objects keyed by the hash of their canonical serialization."""

    entries: dict[str, Loaded] = field(default_factory=dict)
    names: dict[str, str] = field(default_factory=dict)

    def add(self, loaded: Loaded, name: Optional[str] = None) -> str:
        h = content_hash(to_doc(loaded.obj))
        self.entries.setdefault(h, loaded)
        if name:
            self.names[name] = h
        return h

    def load(self, path: str | Path, name: Optional[str] = None) -> str:
        return self.add(load(path), name or Path(path).stem)

    def __getitem__(self, key: str) -> Any:
        return self.entries[self.names.get(key, key)].obj

    def __len__(self) -> int:
        return len(self.entries)
