"""Finite G-sets as explicit action tables, and equivariant maps between them.

A :class:`GSet` stores ``action[g][p]``, the image of point ``p`` under group
element ``g``.  Orbits are listed in order of their smallest point; each orbit
carries the class of its stabilizers and a base point whose stabilizer is the
canonical class representative, which fixes an isomorphism with the standard
orbit ``G/H`` (see :func:`orbit_g_set`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .group import FiniteGroup, GroupError, Subgroup


class GroupMismatch(ValueError):
    pass


class NotASubgroup(GroupError):
    pass


class MismatchedTarget(ValueError):
    pass


class NotEquivariant(ValueError):
    pass


@dataclass(frozen=True)
class Orbit:
    points: tuple[int, ...]
    cls: int
    base: int
    # coset_of[q]: index of q in the standard orbit G/H_cls under g.base -> g H
    coset_of: dict

    @property
    def size(self) -> int:
        return len(self.points)


class GSet:
    def __init__(self, group: FiniteGroup, action: Sequence[Sequence[int]], check: bool = False):
        self.group = group
        self.action = tuple(tuple(row) for row in action)
        self.size = len(self.action[0]) if self.action else 0
        if len(self.action) != group.order:
            raise ValueError("action table needs one row per group element")
        if check:
            self._check()

    def _check(self):
        g, act, n = self.group, self.action, self.size
        if any(len(row) != n or sorted(row) != list(range(n)) for row in act):
            raise ValueError("each group element must act by a permutation")
        if act[0] != tuple(range(n)):
            raise ValueError("identity must act trivially")
        for a in range(g.order):
            for b in range(g.order):
                ab = act[g.mul(a, b)]
                ra, rb = act[a], act[b]
                if any(ab[p] != ra[rb[p]] for p in range(n)):
                    raise ValueError(f"action is not compatible with {a}*{b}")

    def __repr__(self):
        return f"GSet(order={self.group.order}, size={self.size}, tags={self.orbit_tags})"

    def __eq__(self, other):
        return (isinstance(other, GSet) and self.group == other.group
                and self.action == other.action)

    def __hash__(self):
        return hash((self.size, self.action[-1] if self.action else ()))

    def __len__(self):
        return self.size

    def act(self, g: int, p: int) -> int:
        return self.action[g][p]

    def stabilizer(self, p: int) -> tuple[int, ...]:
        return tuple(g for g in range(self.group.order) if self.action[g][p] == p)

    @cached_property
    def orbits(self) -> tuple[Orbit, ...]:
        g = self.group
        classes = g.conjugacy_classes()
        seen = set()
        out = []
        for p in range(self.size):
            if p in seen:
                continue
            pts = tuple(sorted({self.action[a][p] for a in range(g.order)}))
            seen.update(pts)
            c = g.class_of(self.stabilizer(p))
            rep = classes[c].representative.members
            base = next(q for q in pts if self.stabilizer(q) == rep)
            reps = coset_reps(g, g.subgroup_index(rep))
            coset_of = {self.action[r][base]: k for k, r in enumerate(reps)}
            out.append(Orbit(pts, c, base, coset_of))
        return tuple(out)

    @cached_property
    def orbit_of(self) -> tuple[int, ...]:
        where = [0] * self.size
        for k, o in enumerate(self.orbits):
            for p in o.points:
                where[p] = k
        return tuple(where)

    @property
    def orbit_tags(self) -> tuple[int, ...]:
        """Stabilizer class of each orbit, in orbit order."""
        return tuple(o.cls for o in self.orbits)

    @property
    def canonical_tags(self) -> tuple[int, ...]:
        return tuple(sorted(self.orbit_tags))

    def tag_counts(self) -> list[tuple[int, int]]:
        """``(stabilizer_class, multiplicity)`` pairs in class order."""
        out: dict[int, int] = {}
        for c in self.canonical_tags:
            out[c] = out.get(c, 0) + 1
        return sorted(out.items())

    def is_empty(self) -> bool:
        return self.size == 0


class GMap:
    """An equivariant map ``source -> target`` given by its point assignment."""

    def __init__(self, source: GSet, target: GSet, assignment: Sequence[int], check: bool = True):
        self.source = source
        self.target = target
        self.assignment = tuple(assignment)
        if check:
            self._check()

    def _check(self):
        if self.source.group != self.target.group:
            raise GroupMismatch("source and target carry different groups")
        if len(self.assignment) != self.source.size:
            raise ValueError("assignment length differs from source size")
        if any(not (0 <= y < self.target.size) for y in self.assignment):
            raise ValueError("assignment leaves the target")
        sa, ta, f = self.source.action, self.target.action, self.assignment
        for g in range(self.source.group.order):
            for x in range(self.source.size):
                if f[sa[g][x]] != ta[g][f[x]]:
                    raise NotEquivariant(f"f({g}.{x}) != {g}.f({x})")

    def __call__(self, x: int) -> int:
        return self.assignment[x]

    def __repr__(self):
        return f"GMap({self.source.size}->{self.target.size}, {list(self.assignment)})"

    def __eq__(self, other):
        return (isinstance(other, GMap) and self.assignment == other.assignment
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash(self.assignment)

    def then(self, other: "GMap") -> "GMap":
        """``other o self``."""
        return GMap(self.source, other.target,
                    [other.assignment[y] for y in self.assignment], check=False)

    def is_bijective(self) -> bool:
        return (self.source.size == self.target.size
                and len(set(self.assignment)) == self.source.size)

    def inverse(self) -> "GMap":
        inv = [0] * self.target.size
        for x, y in enumerate(self.assignment):
            inv[y] = x
        return GMap(self.target, self.source, inv, check=False)

    def is_orbitwise_injective(self) -> bool:
        """True iff each source orbit maps isomorphically onto a target orbit."""
        return all(len({self.assignment[p] for p in o.points}) == o.size
                   for o in self.source.orbits)


def identity_map(x: GSet) -> GMap:
    return GMap(x, x, range(x.size), check=False)


def _group_cache(g: FiniteGroup) -> dict:
    cache = g.__dict__.get("_gset_cache")
    if cache is None:
        cache = g.__dict__["_gset_cache"] = {}
    return cache


def coset_reps(g: FiniteGroup, h_index: int) -> tuple[int, ...]:
    """Minimal element of each left coset ``gH``, in increasing order."""
    key = ("reps", h_index)
    cache = _group_cache(g)
    if key not in cache:
        h = g._subgroup_members[h_index]
        seen, reps = set(), []
        for a in range(g.order):
            if a not in seen:
                seen.update(g.mul(a, b) for b in h)
                reps.append(a)
        cache[key] = tuple(reps)
    return cache[key]


def orbit_g_set(g: FiniteGroup, h: Subgroup | Iterable[int]) -> GSet:
    """The coset space ``G/H`` with left translation; point 0 is ``H``."""
    members = h.members if isinstance(h, Subgroup) else tuple(sorted(set(h)))
    try:
        hi = g.subgroup_index(members)
    except KeyError:
        raise NotASubgroup(f"{members} is not a subgroup") from None
    key = ("orbit", hi)
    cache = _group_cache(g)
    if key not in cache:
        reps = coset_reps(g, hi)
        where = {}
        for k, r in enumerate(reps):
            for b in members:
                where[g.mul(r, b)] = k
        action = [[where[g.mul(a, r)] for r in reps] for a in range(g.order)]
        cache[key] = GSet(g, action)
    return cache[key]


def standard_orbit(g: FiniteGroup, cls: int) -> GSet:
    """``G/H`` for the canonical representative of class ``cls``."""
    return orbit_g_set(g, g.conjugacy_classes()[cls].representative)


def empty(g: FiniteGroup) -> GSet:
    return GSet(g, [() for _ in range(g.order)])


def coproduct(x: GSet, y: GSet) -> GSet:
    if x.group != y.group:
        raise GroupMismatch("coproduct of G-sets over different groups")
    n = x.size
    return GSet(x.group, [rx + tuple(n + q for q in ry) for rx, ry in zip(x.action, y.action)])


def coproduct_all(g: FiniteGroup, parts: Sequence[GSet]) -> GSet:
    out = empty(g)
    for p in parts:
        out = coproduct(out, p)
    return out


def inclusions(x: GSet, y: GSet) -> tuple[GMap, GMap]:
    """The two coproduct inclusions into ``coproduct(x, y)``."""
    s = coproduct(x, y)
    return (GMap(x, s, range(x.size), check=False),
            GMap(y, s, range(x.size, x.size + y.size), check=False))


def product(x: GSet, y: GSet) -> GSet:
    """Cartesian product, point ``(a, b)`` numbered ``a*|y| + b``."""
    if x.group != y.group:
        raise GroupMismatch("product of G-sets over different groups")
    m = y.size
    return GSet(x.group, [tuple(rx[a] * m + ry[b] for a in range(x.size) for b in range(m))
                          for rx, ry in zip(x.action, y.action)])


def projections(x: GSet, y: GSet) -> tuple[GSet, GMap, GMap]:
    p = product(x, y)
    m = y.size
    return (p, GMap(p, x, [i // m for i in range(p.size)], check=False),
            GMap(p, y, [i % m for i in range(p.size)], check=False))


def from_orbits(g: FiniteGroup, tags: Iterable[int]) -> GSet:
    """Coproduct of standard orbits ``G/H_c`` for ``c`` in ``tags``."""
    return coproduct_all(g, [standard_orbit(g, c) for c in tags])


def pullback(f: GMap, k: GMap) -> tuple[GSet, GMap, GMap]:
    """Fibre product of ``f: X -> Z`` and ``k: Y -> Z`` with its projections.

    Points are the pairs ``(x, y)`` with ``f(x) == k(y)``, in lexicographic order.
    """
    if f.target != k.target:
        raise MismatchedTarget("pullback legs must share a target")
    x, y = f.source, k.source
    fibres: dict[int, list[int]] = {}
    for b, z in enumerate(k.assignment):
        fibres.setdefault(z, []).append(b)
    pairs = [(a, b) for a in range(x.size) for b in fibres.get(f.assignment[a], ())]
    index = {pr: i for i, pr in enumerate(pairs)}
    action = [[index[(rx[a], ry[b])] for a, b in pairs]
              for rx, ry in zip(x.action, y.action)]
    p = GSet(x.group, action)
    return (p, GMap(p, x, [a for a, _ in pairs], check=False),
            GMap(p, y, [b for _, b in pairs], check=False))


def fixed_points(x: GSet, h: Subgroup | Iterable[int]) -> list[int]:
    members = h.members if isinstance(h, Subgroup) else tuple(h)
    return [p for p in range(x.size) if all(x.action[a][p] == p for a in members)]


def fixed_point_count(x: GSet, h: Subgroup | Iterable[int]) -> int:
    members = h.members if isinstance(h, Subgroup) else tuple(sorted(set(h)))
    if members not in x.group._subgroup_lookup:
        raise NotASubgroup(f"{members} is not a subgroup")
    return len(fixed_points(x, members))


def equivariant_maps(x: GSet, y: GSet) -> list[GMap]:
    """All equivariant maps ``x -> y``, sorted by assignment."""
    if x.group != y.group:
        raise GroupMismatch("maps between G-sets over different groups")
    g = x.group
    classes = g.conjugacy_classes()
    choices = []
    for o in x.orbits:
        choices.append(fixed_points(y, classes[o.cls].representative))
    out = []
    for pick in itertools.product(*choices):
        assign = [0] * x.size
        for o, yb in zip(x.orbits, pick):
            reps = coset_reps(g, g.subgroup_index(classes[o.cls].representative))
            for q, k in o.coset_of.items():
                assign[q] = y.action[reps[k]][yb]
        out.append(tuple(assign))
    out.sort()
    return [GMap(x, y, a, check=False) for a in out]


def table_of_marks(g: FiniteGroup) -> list[list[int]]:
    """``marks[i][j] = |(G/H_i)^{H_j}|`` over classes in canonical order."""
    classes = g.conjugacy_classes()
    return [[len(fixed_points(standard_orbit(g, i), cj.representative)) for cj in classes]
            for i in range(len(classes))]


def canonical_form(x: GSet) -> tuple[GSet, GMap]:
    """Standard coproduct of orbits sorted by class, with an isomorphism onto it."""
    order = sorted(range(len(x.orbits)), key=lambda k: (x.orbits[k].cls, x.orbits[k].points[0]))
    can = from_orbits(x.group, [x.orbits[k].cls for k in order])
    assign = [0] * x.size
    offset = 0
    for k in order:
        o = x.orbits[k]
        for q, c in o.coset_of.items():
            assign[q] = offset + c
        offset += o.size
    return can, GMap(x, can, assign, check=False)


def is_isomorphic(x: GSet, y: GSet) -> Optional[GMap]:
    """An equivariant bijection ``x -> y`` if one exists."""
    if x.group != y.group:
        raise GroupMismatch("G-sets over different groups")
    if x.canonical_tags != y.canonical_tags:
        return None
    _, ix = canonical_form(x)
    _, iy = canonical_form(y)
    return ix.then(iy.inverse())
