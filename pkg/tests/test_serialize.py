import json
from fractions import Fraction
from pathlib import Path

import pytest

from eqalg import catalog, serialize
from eqalg.burnside import BurnsideElement
from eqalg.group import NonAssociative
from eqalg.indexing import InvalidRelation, TransferSystem, enumerate_transfer_systems
from eqalg.mackey import MackeyFunctor, burnside_mackey
from eqalg.normed_alg import NormedAlgebraDiagram, validate_diagram
from eqalg.serialize import MalformedFile, Workspace, dumps, from_doc, load, roundtrip

FIX = Path(__file__).parent / "fixtures"
CANONICAL = ["group_s3.json", "gset_s3.json", "burnside_c2.json", "span_s3.json",
             "mackey_c2.json", "ts_c4.json", "ts_s3_max.json", "diagram_c2_max.json",
             "diagram_dga_s3.json"]


@pytest.mark.parametrize("name", CANONICAL)
def test_round_trip_is_byte_identical(name):
    path = FIX / name
    assert roundtrip(path) == path.read_text()


def test_every_kind_has_a_fixture():
    kinds = {load(FIX / n).kind for n in CANONICAL}
    assert kinds == set(serialize.KINDS)


def test_rationals_are_strings_in_lowest_terms():
    text = (FIX / "burnside_c2.json").read_text()
    doc = json.loads(text)
    assert doc["coeffs"] == ["-1/2", "1"]
    e = load(FIX / "burnside_c2.json").obj
    assert isinstance(e, BurnsideElement) and e.coeffs == (Fraction(-1, 2), 1)
    doc["coeffs"] = ["-2/4", "1"]
    assert dumps(serialize.to_doc(from_doc(doc).obj)) == text


def test_group_reference_resolves_and_survives():
    loaded = load(FIX / "ts_s3_max.json")
    assert loaded.group_ref == "group_s3.json"
    assert loaded.obj.group == catalog.symmetric(3)


def test_objects_survive(tmp_path):
    m = burnside_mackey(catalog.symmetric(3))
    serialize.save(tmp_path / "m.json", m)
    assert load(tmp_path / "m.json").obj == m
    for t in enumerate_transfer_systems(catalog.dihedral(4)):
        doc = serialize.to_doc(t)
        assert from_doc(json.loads(dumps(doc))).obj == t
    d = load(FIX / "diagram_c2_max.json").obj
    assert isinstance(d, NormedAlgebraDiagram) and validate_diagram(d).ok


@pytest.mark.parametrize("doc, exc", [
    ([1, 2], MalformedFile),
    ({"kind": "nope"}, MalformedFile),
    ({"kind": "group"}, MalformedFile),
    ({"kind": "group", "table": [[0, 1]]}, MalformedFile),
    ({"kind": "burnside", "group": {"table": [[0]]}, "coeffs": [0.5]}, MalformedFile),
    ({"kind": "burnside", "group": {"table": [[0]]}, "coeffs": ["1/0"]}, MalformedFile),
    ({"kind": "burnside", "group": {"table": [[0]]}, "coeffs": ["1", "2"]}, MalformedFile),
    ({"kind": "mackey", "group": {"table": [[0]]}, "dims": [1], "maps": []}, MalformedFile),
    ({"kind": "transfer_system", "group": {"table": [[0]]}, "pairs": [[0, 7]]}, MalformedFile),
    ({"kind": "group", "table": [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3],
                                 [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]}, NonAssociative),
])
def test_bad_documents(doc, exc):
    with pytest.raises(exc):
        from_doc(doc)


def test_invalid_transfer_pairs():
    with pytest.raises(InvalidRelation):
        load(FIX / "bad_ts_c4.json")


def test_syntax_error_is_malformed():
    with pytest.raises(MalformedFile):
        load(FIX / "bad_syntax.json")


def test_workspace_hashes_content():
    ws = Workspace()
    a = ws.load(FIX / "mackey_c2.json")
    b = ws.add(serialize.Loaded("mackey", burnside_mackey(catalog.cyclic(2))))
    assert a == b and len(ws) == 1
    assert isinstance(ws["mackey_c2"], MackeyFunctor)
    ws.load(FIX / "ts_c4.json")
    assert isinstance(ws["ts_c4"], TransferSystem) and len(ws) == 2
