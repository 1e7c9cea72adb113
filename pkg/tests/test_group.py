import pytest
from hypothesis import given, settings, strategies as st

from eqalg import catalog
from eqalg.group import (FiniteGroup, MalformedSpec, MissingIdentity, MissingInverse,
                         NonAssociative, OrderCapExceeded, conjugacy_classes_of_subgroups,
                         from_table, is_subconjugate, load_group, subgroups)

LOOP5 = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]


def test_load_trivial_table():
    g = load_group({"table": [[0]]})
    assert g.order == 1


def test_load_transposition():
    g = load_group({"degree": 2, "generators": [[1, 0]]})
    assert g.order == 2


def test_load_s3_from_generators():
    g = load_group({"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    assert g.order == 6
    assert not g.is_abelian()


def test_identity_relabelled_to_zero():
    g = from_table([[1, 0], [0, 1]])
    assert g.table == ((0, 1), (1, 0))


@pytest.mark.parametrize("spec, exc", [
    ({"table": LOOP5}, NonAssociative),
    ({"table": [[1, 1], [1, 1]]}, MissingIdentity),
    ({"table": [[0, 1], [1, 1]]}, MissingInverse),
    ({"table": [[0, 1]]}, MalformedSpec),
    ({"table": [[0, 5], [5, 0]]}, MalformedSpec),
    ({"degree": 2, "generators": [[0, 0]]}, MalformedSpec),
    ({"nothing": 1}, MalformedSpec),
    ({"table": [[0]], "order": 3}, MalformedSpec),
])
def test_load_errors(spec, exc):
    with pytest.raises(exc):
        load_group(spec)


def test_order_cap(monkeypatch):
    monkeypatch.setenv("EQALG_MAX_ORDER", "5")
    with pytest.raises(OrderCapExceeded):
        catalog.symmetric(3)


@pytest.mark.parametrize("name, count", [("C1", 1), ("C2", 2), ("S3", 6), ("C4", 3),
                                         ("C2xC2", 5), ("D8", 10), ("Q8", 6), ("A4", 10)])
def test_subgroup_counts(name, count):
    assert len(subgroups(catalog.by_name(name))) == count


def test_classes_c2():
    classes = conjugacy_classes_of_subgroups(catalog.cyclic(2))
    assert [c.weyl.order for c in classes] == [2, 1]


def test_classes_s3():
    classes = conjugacy_classes_of_subgroups(catalog.symmetric(3))
    assert [c.representative.order for c in classes] == [1, 2, 3, 6]
    assert [c.size for c in classes] == [1, 3, 1, 1]
    assert classes[2].weyl.order == 2


def test_is_subconjugate_examples():
    g = catalog.symmetric(3)
    subs = {s.members: s for s in subgroups(g)}
    trivial = g.subgroup([0])
    for h in subs.values():
        assert is_subconjugate(g, trivial, h) == 0
    c3 = next(s for s in subs.values() if s.order == 3)
    c2s = [s for s in subs.values() if s.order == 2]
    assert is_subconjugate(g, c3, c2s[0]) is None
    x = is_subconjugate(g, c2s[0], c2s[1])
    assert x is not None
    assert g.conjugate_subgroup(g.inv(x), c2s[0]).members == c2s[1].members


@pytest.mark.parametrize("g", catalog.small_groups(), ids=lambda g: g.name)
def test_classes_partition_subgroups(g):
    classes = g.conjugacy_classes()
    members = [s.members for c in classes for s in c.class_members]
    assert sorted(members) == sorted(s.members for s in g.subgroups())
    for c in classes:
        assert c.size * c.normalizer.order == g.order
        assert c.weyl.order * c.representative.order == c.normalizer.order


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8))
def test_direct_product_orders(a, b):
    g = catalog.direct_product(catalog.cyclic(a), catalog.cyclic(b))
    assert g.order == a * b
    assert g.is_abelian()
    assert isinstance(g, FiniteGroup)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(catalog.small_groups()), st.data())
def test_subgroup_closure_property(g, data):
    a = data.draw(st.integers(0, g.order - 1))
    b = data.draw(st.integers(0, g.order - 1))
    h = g.closure([a, b])
    assert g.subgroup(h).members == tuple(sorted(h))
    assert g.order % len(h) == 0
