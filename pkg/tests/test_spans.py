import random

import pytest
from hypothesis import given, settings, strategies as st

from eqalg import catalog
from eqalg.gsets import GMap, GSet, GroupMismatch, empty, from_orbits, orbit_g_set, standard_orbit
from eqalg.indexing import maximal, minimal, transfer_to_indexing
from eqalg.mackey import orbit_map, orbit_map_keys
from eqalg.spans import (ALL, BoundaryMismatch, ObjectMismatch, Span, TripleConstraint,
                         backward_span, check_adequate, check_semiadditive, class_key, compose,
                         decompose, forward_span, hom_set, identity_span, spans_equivalent)
from helpers import random_gset, random_span

C2 = catalog.cyclic(2)
S3 = catalog.symmetric(3)


def relabel(s: Span, rng: random.Random) -> Span:
    """The same span with its apex points permuted."""
    z = s.apex
    perm = list(range(z.size))
    rng.shuffle(perm)
    action = [[0] * z.size for _ in range(z.group.order)]
    for g, row in enumerate(z.action):
        for p, q in enumerate(row):
            action[g][perm[p]] = perm[q]
    z2 = GSet(z.group, action)
    back, fwd = [0] * z.size, [0] * z.size
    for p in range(z.size):
        back[perm[p]] = s.back.assignment[p]
        fwd[perm[p]] = s.fwd.assignment[p]
    return Span(GMap(z2, s.left, back), GMap(z2, s.right, fwd))


def test_identity_composition():
    rng = random.Random(0)
    x, y = from_orbits(S3, [0, 2]), from_orbits(S3, [1, 3])
    s = random_span(rng, x, y)
    assert spans_equivalent(compose(identity_span(y), s), s)
    assert spans_equivalent(compose(s, identity_span(x)), s)


def test_restriction_after_transfer():
    free = standard_orbit(C2, 0)
    proj = orbit_map(C2, (0, 1, 0))
    s = compose(backward_span(proj), forward_span(proj))
    assert s.apex.canonical_tags == (0, 0)
    assert s.left == free and s.right == free


def test_empty_apex_composition():
    x = from_orbits(C2, [0, 1])
    e = Span(GMap(empty(C2), x, []), GMap(empty(C2), x, []))
    assert compose(identity_span(x), e).apex.is_empty()
    assert compose(e, identity_span(x)).apex.is_empty()


def test_compose_mismatch():
    x, y = standard_orbit(C2, 0), standard_orbit(C2, 1)
    with pytest.raises(ObjectMismatch):
        compose(identity_span(x), identity_span(y))


def test_equivalence_examples():
    rng = random.Random(3)
    s = random_span(rng, from_orbits(S3, [0]), from_orbits(S3, [1, 2]))
    assert spans_equivalent(s, s)
    assert spans_equivalent(s, relabel(s, rng))
    top = standard_orbit(C2, 1)
    a, b = hom_set(top, top)
    assert not spans_equivalent(a, b)
    with pytest.raises(BoundaryMismatch):
        spans_equivalent(a, identity_span(standard_orbit(C2, 0)))


def test_hom_set_examples():
    top = standard_orbit(C2, 1)
    assert len(hom_set(empty(C2), top)) == 1
    assert len(hom_set(top, top)) == 2
    free = standard_orbit(C2, 0)
    fold = TripleConstraint.named("all", "fold")
    assert len(hom_set(free, top)) == 1
    assert hom_set(free, top, fold) == []
    with pytest.raises(GroupMismatch):
        hom_set(top, standard_orbit(S3, 0))


@pytest.mark.parametrize("g", [C2, S3, catalog.cyclic(4)], ids=lambda g: g.name)
def test_endo_hom_set_is_burnside_basis(g):
    top = standard_orbit(g, len(g.conjugacy_classes()) - 1)
    spans = hom_set(top, top)
    assert sorted(s.apex.orbit_tags for s in spans) == [(c,) for c in range(len(spans))]


def test_semiadditive_examples():
    top = standard_orbit(C2, 1)
    r = check_semiadditive(empty(C2), top, top)
    assert r.ok and r.lhs == r.rhs_y
    r = check_semiadditive(top, top, top)
    assert r.ok and r.lhs == 4
    r = check_semiadditive(standard_orbit(S3, 1), standard_orbit(S3, 2), standard_orbit(S3, 3))
    assert r.ok


def corpus(g):
    maps = [orbit_map(g, k) for k in orbit_map_keys(g)]
    x = from_orbits(g, [0, len(g.conjugacy_classes()) - 1])
    maps.append(GMap(x, standard_orbit(g, len(g.conjugacy_classes()) - 1), [0] * x.size))
    return maps


@pytest.mark.parametrize("g", [C2, S3], ids=lambda g: g.name)
def test_adequacy(g):
    assert check_adequate(ALL, corpus(g)).ok
    assert check_adequate(TripleConstraint.named("iso", "all"), corpus(g)).ok
    for t in (minimal(g), maximal(g)):
        i = transfer_to_indexing(t)
        c = TripleConstraint(forward=i.contains, name="all/I")
        assert check_adequate(c, corpus(g)).ok


def test_inadequate_constraint_is_reported():
    # forward = maps into G/G only is not stable under pullback along all backward maps
    g = C2
    c = TripleConstraint(forward=lambda f: f.source.orbit_tags == (0,), name="weird")
    assert not check_adequate(c, corpus(g)).ok


def test_decompose_counts_orbits():
    rng = random.Random(5)
    s = random_span(rng, from_orbits(S3, [0, 1]), from_orbits(S3, [3]), max_orbits=3)
    parts = decompose(s)
    assert len(parts) == len(s.apex.orbits)
    assert sum(p.apex.size for p in parts) == s.apex.size


GROUPS = [C2, catalog.cyclic(4), S3]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(GROUPS), st.integers(0, 10**6))
def test_associativity_and_units(g, seed):
    rng = random.Random(seed)
    xs = [random_gset(rng, g) for _ in range(4)]
    s1, s2, s3 = (random_span(rng, xs[i], xs[i + 1]) for i in range(3))
    assert spans_equivalent(compose(s3, compose(s2, s1)), compose(compose(s3, s2), s1))
    assert spans_equivalent(compose(identity_span(xs[1]), s1), s1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.integers(0, 10**6))
def test_class_key_matches_isomorphism(g, seed):
    rng = random.Random(seed)
    x, y = random_gset(rng, g), random_gset(rng, g)
    s, t = random_span(rng, x, y), random_span(rng, x, y)
    assert (class_key(s) == class_key(t)) == spans_equivalent(s, t)
    assert class_key(relabel(s, rng)) == class_key(s)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(GROUPS), st.integers(0, 10**6))
def test_semiadditive_random(g, seed):
    rng = random.Random(seed)
    x, y, z = (random_gset(rng, g) for _ in range(3))
    assert check_semiadditive(x, y, z).ok


def test_spans_to_a_point_count_local_burnside_basis():
    # spans G/H <= z => G/G with one apex orbit are the subgroups of H up to H-conjugacy
    top = standard_orbit(S3, 3)
    counts = [len(hom_set(standard_orbit(S3, c), top)) for c in range(4)]
    assert counts == [1, 2, 2, 4]
    x = orbit_g_set(S3, S3.subgroup([0]))
    assert len(hom_set(x, top)) == 1
