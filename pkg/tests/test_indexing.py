import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eqalg import catalog
from eqalg.burnside import _marks_table
from eqalg.group import OrderCapExceeded
from eqalg.gsets import GroupMismatch
from eqalg.indexing import (IndexingSystem, InvalidIndexingSystem, InvalidRelation,
                            TransferSystem, all_maps, axiom_scan_masks, build_norm_category,
                            closure, closure_masks, enumerate_closure, enumerate_exhaustive,
                            enumerate_transfer_systems, exhaustive_masks, fold_maps, hasse_dot,
                            indexing_to_transfer, key_variables, lattice_ops, mask_of, maximal,
                            minimal, pair_orbits, subset_scan_masks, transfer_system,
                            transfer_to_indexing, verify_indexing_system, violations)
from eqalg.mackey import orbit_map

C2 = catalog.cyclic(2)
C4 = catalog.cyclic(4)
S3 = catalog.symmetric(3)
SMALL = catalog.small_groups(8)
NO_BIG = [g for g in SMALL if g.name != "C2xC2xC2"]


def idx(g, order):
    return next(i for i, m in enumerate(g._subgroup_members) if len(m) == order)


@pytest.mark.parametrize("g", [C2, C4, S3], ids=lambda g: g.name)
def test_all_and_fold_are_indexing_systems(g):
    assert verify_indexing_system(all_maps(g)).ok
    assert verify_indexing_system(fold_maps(g)).ok


def test_c4_top_pair_only():
    rel = {(i, i) for i in range(3)} | {(idx(C4, 2), idx(C4, 4))}
    t = TransferSystem(C4, frozenset(rel))
    assert mask_of(t) in set(exhaustive_masks(C4).tolist())
    assert verify_indexing_system(transfer_to_indexing(t)).ok


def test_invalid_relations():
    one, two, four = idx(C4, 1), idx(C4, 2), idx(C4, 4)
    base = {(i, i) for i in range(3)}
    with pytest.raises(InvalidRelation):
        TransferSystem(C4, frozenset(base | {(one, two), (two, four)}))  # not transitive
    with pytest.raises(InvalidRelation):
        TransferSystem(C4, frozenset(base | {(one, four)}))  # restriction to C2 fails
    with pytest.raises(InvalidRelation):
        TransferSystem(C4, frozenset({(one, two)}))  # not reflexive
    with pytest.raises(InvalidRelation):
        closure(C4, [(four, one)])


def test_conjugation_closure_is_required():
    s2 = [i for i, m in enumerate(S3._subgroup_members) if len(m) == 2]
    rel = {(i, i) for i in range(6)} | {(idx(S3, 1), s2[0])}
    assert any(v[0] == "conjugation" for v in violations(S3, frozenset(rel)))


def test_transfer_indexing_examples():
    for g in (C2, S3):
        assert indexing_to_transfer(all_maps(g)) == maximal(g)
        assert indexing_to_transfer(fold_maps(g)) == minimal(g)
    t = maximal(C2)
    assert orbit_map(C2, (0, 1, 0)) in transfer_to_indexing(t)
    assert orbit_map(C2, (0, 1, 0)) not in transfer_to_indexing(minimal(C2))


@pytest.mark.parametrize("g", [C2, C4, catalog.klein_four(), S3, catalog.cyclic(6)],
                         ids=lambda g: g.name)
def test_round_trip_and_axioms_for_every_system(g):
    for t in enumerate_transfer_systems(g):
        i = transfer_to_indexing(t)
        assert indexing_to_transfer(i) == t
        assert verify_indexing_system(i).ok


@pytest.mark.parametrize("name, count", [("C1", 1), ("C2", 2), ("C3", 2), ("C4", 5),
                                         ("C2xC2", 19), ("C6", 10), ("S3", 9), ("C8", 14),
                                         ("D8", 294), ("Q8", 68), ("C4xC2", 328)])
def test_counts(name, count):
    g = next(h for h in SMALL if h.name == name)
    assert len(enumerate_transfer_systems(g)) == count


@pytest.mark.parametrize("g", NO_BIG, ids=lambda g: g.name)
def test_search_agrees_with_subset_scans(g):
    masks = exhaustive_masks(g)
    assert np.array_equal(masks, closure_masks(g))
    assert np.array_equal(masks, subset_scan_masks(g))
    if len(pair_orbits(g)) <= 7:
        assert np.array_equal(masks, axiom_scan_masks(g))


def test_enumerations_return_same_systems():
    assert enumerate_exhaustive(S3) == enumerate_closure(S3)
    systems = enumerate_transfer_systems(S3)
    assert systems[0] == minimal(S3) and systems[-1] == maximal(S3)


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv("EQALG_MAX_ORDER", "24")
    s4 = catalog.symmetric(4)
    monkeypatch.setenv("EQALG_MAX_ORDER", "12")
    with pytest.raises(OrderCapExceeded):
        enumerate_transfer_systems(s4)


def test_lattice_examples():
    for t in enumerate_transfer_systems(C4):
        assert lattice_ops(t, t) == (t, t)
        assert lattice_ops(minimal(C4), t)[1] == t
    a = transfer_system(C4, [(idx(C4, 1), idx(C4, 2))])
    b = transfer_system(C4, [(idx(C4, 2), idx(C4, 4))])
    assert lattice_ops(a, b)[1] == maximal(C4)
    with pytest.raises(GroupMismatch):
        lattice_ops(a, maximal(C2))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([C4, S3, catalog.klein_four(), catalog.dihedral(4)]), st.integers(0, 10**6))
def test_closure_is_least(g, seed):
    rng = random.Random(seed)
    orbits = pair_orbits(g)
    gens = [rng.choice(o) for o in orbits if rng.random() < 0.3]
    t = transfer_system(g, gens)
    assert all(p in t for p in gens)
    for s in enumerate_transfer_systems(g):
        if all(p in s for p in gens):
            assert t <= s


def test_norm_category_examples():
    n = build_norm_category(minimal(C2))
    assert n.hom(0, 1) == [] and len(n.hom(0, 0)) == 2
    assert n.is_groupoid()
    n = build_norm_category(maximal(C2))
    assert len(n.hom(0, 1)) == 1
    marks = _marks_table(S3)
    n = build_norm_category(maximal(S3))
    for i in n.objects:
        for j in n.objects:
            assert len(n.hom(i, j)) == marks[j][i]
    assert n.is_closed()


def test_bad_indexing_system_rejected():
    # maps into G/G only: not closed under pullback
    g = C2
    i = IndexingSystem(g, lambda f: f.target.orbit_tags == (1,) or f.is_bijective(), "bad")
    with pytest.raises(InvalidIndexingSystem):
        build_norm_category(i)


@pytest.mark.parametrize("g", NO_BIG, ids=lambda g: g.name)
def test_key_variables_decide_membership(g):
    variables = key_variables(g)
    rng = random.Random(g.order)
    masks = exhaustive_masks(g)
    for m in rng.sample(list(masks), min(5, len(masks))):
        t = TransferSystem(g, frozenset(
            p for n, orb in enumerate(pair_orbits(g)) if int(m) >> n & 1 for p in orb)
            | {(i, i) for i in range(len(g._subgroup_members))})
        n = build_norm_category(t, verify=False)
        for k, v in variables.items():
            assert (k in n) == (v < 0 or bool(int(m) >> v & 1))


def test_hasse_dot_c4():
    dot = hasse_dot(enumerate_transfer_systems(C4))
    assert dot.startswith("digraph") and dot.count("->") == 5
    dot = build_norm_category(maximal(C2)).to_dot()
    assert 'label="G/H_0"' in dot and dot.count("->") == 4
