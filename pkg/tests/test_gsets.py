import random

import pytest
from hypothesis import given, settings, strategies as st

from eqalg import catalog
from eqalg.gsets import (GMap, GroupMismatch, MismatchedTarget, NotASubgroup, NotEquivariant,
                         canonical_form, coproduct, empty, equivariant_maps, fixed_point_count,
                         from_orbits, identity_map, is_isomorphic, orbit_g_set, product,
                         pullback, standard_orbit, table_of_marks)
from helpers import random_gset, random_map

C2 = catalog.cyclic(2)
S3 = catalog.symmetric(3)


def sub(g, order):
    return next(s for s in g.subgroups() if s.order == order)


def test_orbit_g_set_examples():
    top = orbit_g_set(S3, sub(S3, 6))
    assert top.size == 1
    free = orbit_g_set(C2, sub(C2, 1))
    assert free.size == 2 and free.action[1] == (1, 0)
    x = orbit_g_set(S3, sub(S3, 2))
    assert x.size == 3 and x.orbit_tags == (1,)


def test_orbit_g_set_rejects_non_subgroup():
    with pytest.raises(NotASubgroup):
        orbit_g_set(S3, [0, 1, 2])


def test_pullback_examples():
    x = standard_orbit(C2, 1)
    p, _, _ = pullback(identity_map(x), identity_map(x))
    assert is_isomorphic(p, x)
    free = standard_orbit(C2, 0)
    f = GMap(free, x, [0, 0])
    p, a, b = pullback(f, f)
    assert p.size == 4 and p.canonical_tags == (0, 0)
    e = empty(C2)
    p, _, _ = pullback(f, GMap(e, x, []))
    assert p.is_empty()


def test_pullback_mismatch():
    free = standard_orbit(C2, 0)
    with pytest.raises(MismatchedTarget):
        pullback(identity_map(free), identity_map(standard_orbit(C2, 1)))


def test_products_and_coproducts():
    x = standard_orbit(C2, 0)
    assert is_isomorphic(coproduct(x, empty(C2)), x)
    assert product(x, x).canonical_tags == (0, 0)
    y = product(standard_orbit(S3, 1), standard_orbit(S3, 2))
    assert y.size == 6 and y.canonical_tags == (0,)
    with pytest.raises(GroupMismatch):
        coproduct(x, standard_orbit(S3, 0))


def test_equivariant_map_counts():
    assert equivariant_maps(standard_orbit(C2, 1), standard_orbit(C2, 0)) == []
    assert len(equivariant_maps(standard_orbit(C2, 0), standard_orbit(C2, 0))) == 2
    assert len(equivariant_maps(standard_orbit(S3, 1), standard_orbit(S3, 1))) == 1


def test_fixed_point_counts():
    x = from_orbits(S3, [0, 1, 2])
    assert fixed_point_count(x, [0]) == x.size
    assert fixed_point_count(standard_orbit(C2, 0), [0, 1]) == 0
    assert fixed_point_count(standard_orbit(S3, 2), sub(S3, 3)) == 2
    with pytest.raises(NotASubgroup):
        fixed_point_count(x, [0, 1, 2])


def test_tables_of_marks():
    assert table_of_marks(catalog.trivial()) == [[1]]
    assert table_of_marks(C2) == [[2, 0], [1, 1]]
    assert table_of_marks(S3) == [[6, 0, 0, 0], [3, 1, 0, 0], [2, 0, 2, 0], [1, 1, 1, 1]]


def test_isomorphism_examples():
    x = from_orbits(C2, [0, 1])
    assert tuple(is_isomorphic(x, x).assignment) == tuple(range(x.size))
    assert is_isomorphic(x, from_orbits(C2, [1, 0])) is not None
    assert is_isomorphic(standard_orbit(C2, 0), from_orbits(C2, [1, 1])) is None


def test_non_equivariant_map_rejected():
    free = standard_orbit(C2, 0)
    with pytest.raises(NotEquivariant):
        GMap(standard_orbit(C2, 1), free, [0])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(catalog.small_groups(6)), st.integers(0, 10**6))
def test_pullback_size_is_fibrewise(g, seed):
    rng = random.Random(seed)
    z = random_gset(rng, g, allow_empty=False)
    x, y = random_gset(rng, g), random_gset(rng, g)
    f, k = random_map(rng, x, z), random_map(rng, y, z)
    if f is None or k is None:
        return
    p, a, b = pullback(f, k)
    expected = sum(f.assignment.count(t) * k.assignment.count(t) for t in range(z.size))
    assert p.size == expected
    assert all(f.assignment[a.assignment[i]] == k.assignment[b.assignment[i]]
               for i in range(p.size))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(catalog.small_groups(6)), st.integers(0, 10**6))
def test_canonical_form_is_iso(g, seed):
    x = random_gset(random.Random(seed), g, max_orbits=3)
    can, iso = canonical_form(x)
    assert iso.is_bijective() and iso.source == x and iso.target == can
    assert can.canonical_tags == x.canonical_tags


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(catalog.small_groups(8)), st.integers(0, 10**6))
def test_marks_of_product_multiply(g, seed):
    rng = random.Random(seed)
    x, y = random_gset(rng, g), random_gset(rng, g)
    xy = product(x, y)
    for c in g.conjugacy_classes():
        h = c.representative
        assert fixed_point_count(xy, h) == fixed_point_count(x, h) * fixed_point_count(y, h)
