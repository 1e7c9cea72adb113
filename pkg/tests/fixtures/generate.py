"""Regenerate the JSON fixtures: ``python3 tests/fixtures/generate.py``."""

from pathlib import Path

from eqalg import catalog, indexing, mackey, normed_alg, serialize
from eqalg.burnside import rational_idempotents
from eqalg.gsets import GMap, from_orbits, standard_orbit
from eqalg.spans import Span

HERE = Path(__file__).parent


def main():
    c2, c4, s3, c1 = catalog.cyclic(2), catalog.cyclic(4), catalog.symmetric(3), catalog.trivial()
    for name, g in (("c1", c1), ("c2", c2), ("c4", c4), ("s3", s3)):
        serialize.save(HERE / f"group_{name}.json", g)

    serialize.save(HERE / "gset_s3.json", from_orbits(s3, [0, 1, 3]), "group_s3.json")
    serialize.save(HERE / "burnside_c2.json", rational_idempotents(c2)[1])
    apex = from_orbits(s3, [0, 1])
    left, right = standard_orbit(s3, 1), standard_orbit(s3, 3)
    span = Span(GMap(apex, left, [left.action[g][0] for g in range(6)] + [0, 1, 2]),
                GMap(apex, right, [0] * apex.size))
    serialize.save(HERE / "span_s3.json", span, "group_s3.json")

    serialize.save(HERE / "mackey_c2.json", mackey.burnside_mackey(c2))
    serialize.save(HERE / "mackey_s3.json", mackey.burnside_mackey(s3), "group_s3.json")
    serialize.save(HERE / "mackey_zero_c2.json", mackey.zero_mackey(c2), "group_c2.json")
    doc = serialize.to_doc(mackey.burnside_mackey(s3), "group_s3.json")
    entry = next(m for m in doc["maps"] if (m["source"], m["target"]) == (0, 3))
    entry["tr"] = [["0"] for _ in entry["tr"]]
    (HERE / "mackey_s3_corrupt.json").write_text(serialize.dumps(doc))

    serialize.save(HERE / "ts_c2_max.json", indexing.maximal(c2), "group_c2.json")
    serialize.save(HERE / "ts_c2_min.json", indexing.minimal(c2), "group_c2.json")
    serialize.save(HERE / "ts_c4.json", indexing.enumerate_transfer_systems(c4)[2])
    serialize.save(HERE / "ts_s3_max.json", indexing.maximal(s3), "group_s3.json")

    n = indexing.build_norm_category(indexing.maximal(c2))
    const = normed_alg.constant_diagram(normed_alg.rationals(), n)
    serialize.save(HERE / "diagram_const_c2.json", const, "group_c2.json")
    serialize.save(HERE / "diagram_perturbed_c2.json",
                   normed_alg.perturbed(const, n.morphisms[2]), "group_c2.json")
    objects = {0: normed_alg.rationals(), 1: normed_alg.dual_numbers()}
    morphisms = {k: normed_alg.identity_map(objects[k[0]]) if k[0] == k[1]
                 else normed_alg.unit_map(objects[1]) for k in n.morphisms}
    serialize.save(HERE / "diagram_c2_max.json",
                   normed_alg.NormedAlgebraDiagram(n, objects, morphisms), "group_c2.json")
    dg = normed_alg.constant_diagram(normed_alg.acyclic_pair(),
                                     indexing.build_norm_category(indexing.maximal(s3)))
    serialize.save(HERE / "diagram_dga_s3.json", dg, "group_s3.json")

    # malformed or invalid inputs for the exit-code contract
    loop = {"name": "loop5", "order": 5, "table": [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2],
                                                   [2, 4, 0, 1, 3], [3, 2, 4, 0, 1],
                                                   [4, 3, 1, 2, 0]]}
    (HERE / "bad_nonassociative.json").write_text(serialize.dumps({"kind": "group", **loop}))
    (HERE / "bad_syntax.json").write_text('{"kind": "group", "table": [[0]\n')
    s4 = catalog.symmetric(4)
    (HERE / "group_s4.json").write_text(
        serialize.dumps({"kind": "group", "name": "S4", "degree": 4,
                         "generators": [[1, 0, 2, 3], [1, 2, 3, 0]]}))
    assert s4.order == 24
    (HERE / "bad_ts_c2.json").write_text(serialize.dumps(
        {"kind": "transfer_system", "group": "group_c2.json", "pairs": [[1, 0]]}))
    (HERE / "bad_ts_c4.json").write_text(serialize.dumps(
        {"kind": "transfer_system", "group": "group_c4.json", "pairs": [[0, 2]]}))


if __name__ == "__main__":
    main()
