"""Finite groups given by multiplication tables, with their subgroup lattices.

Elements are the integers ``0..n-1`` and the identity is always ``0``.
Subgroups are stored as sorted tuples of element indices.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

DEFAULT_MAX_ORDER = 24


class GroupError(ValueError):
    pass


class MalformedSpec(GroupError):
    pass


class MissingIdentity(GroupError):
    pass


class MissingInverse(GroupError):
    pass


class NonAssociative(GroupError):
    pass


class OrderCapExceeded(GroupError):
    pass


def max_order(default: int = DEFAULT_MAX_ORDER) -> int:
    """Exhaustive-search cap; ``EQALG_MAX_ORDER`` overrides ``default``."""
    value = os.environ.get("EQALG_MAX_ORDER")
    if value:
        return int(value)
    return default


class FiniteGroup:
    """A finite group with elements ``0..n-1`` and identity ``0``.

    ``table[a][b]`` is the index of ``a*b``.  When the group came from
    permutation generators, ``perms[a]`` is the permutation of element ``a``.
    """

    def __init__(self, table: Sequence[Sequence[int]], perms=None, name: str = ""):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.perms = None if perms is None else tuple(tuple(p) for p in perms)
        self.name = name
        self._check()
        self.inverses = tuple(
            next(b for b in range(self.order) if self.table[a][b] == 0)
            for a in range(self.order))

    def _check(self):
        n = self.order
        t = self.table
        if n == 0:
            raise MalformedSpec("a group has at least one element")
        for row in t:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise MalformedSpec("table must be square with entries in 0..n-1")
        if any(t[0][a] != a or t[a][0] != a for a in range(n)):
            raise MissingIdentity("element 0 is not a two-sided identity")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise NonAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})")
        for a in range(n):
            if not any(t[a][b] == 0 and t[b][a] == 0 for b in range(n)):
                raise MissingInverse(f"element {a} has no inverse")

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __len__(self):
        return self.order

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, x: int, a: int) -> int:
        """``x a x^-1``."""
        return self.table[self.table[x][a]][self.inverses[x]]

    def closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Members of the subgroup generated by ``gens``."""
        members = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            new = []
            for a in frontier:
                for s in gens:
                    b = self.table[a][s]
                    if b not in members:
                        members.add(b)
                        new.append(b)
            frontier = new
        return tuple(sorted(members))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    # subgroup lattice

    @cached_property
    def _subgroup_members(self) -> tuple[tuple[int, ...], ...]:
        cap = max_order()
        if self.order > cap:
            raise OrderCapExceeded(f"order {self.order} exceeds cap {cap}")
        cyclic = {self.closure([a]) for a in range(self.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for h in frontier:
                for c in cyclic:
                    if set(c) <= set(h):
                        continue
                    j = self.closure(h + c)
                    if j not in found:
                        new.add(j)
            found |= new
            frontier = new
        return tuple(sorted(found, key=lambda m: (len(m), m)))

    @cached_property
    def _subgroup_lookup(self) -> dict:
        return {m: i for i, m in enumerate(self._subgroup_members)}

    def subgroups(self) -> list["Subgroup"]:
        """All subgroups, ordered by order and then by sorted member tuple."""
        return [Subgroup(self, m) for m in self._subgroup_members]

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        m = tuple(sorted(set(members)))
        if m not in self._subgroup_lookup:
            raise GroupError(f"{m} is not a subgroup")
        return Subgroup(self, m)

    def subgroup_index(self, h: "Subgroup | Iterable[int]") -> int:
        m = h.members if isinstance(h, Subgroup) else tuple(sorted(set(h)))
        return self._subgroup_lookup[m]

    def conjugate_subgroup(self, x: int, h: "Subgroup") -> "Subgroup":
        """``x h x^-1``."""
        return Subgroup(self, tuple(sorted(self.conj(x, a) for a in h.members)))

    @cached_property
    def _conj_action(self) -> tuple[tuple[int, ...], ...]:
        # _conj_action[x][i]: index of x H_i x^-1
        subs = self._subgroup_members
        look = self._subgroup_lookup
        return tuple(
            tuple(look[tuple(sorted(self.conj(x, a) for a in m))] for m in subs)
            for x in range(self.order))

    def conjugate_index(self, x: int, i: int) -> int:
        return self._conj_action[x][i]

    @cached_property
    def _classes(self) -> tuple["SubgroupClass", ...]:
        subs = self._subgroup_members
        seen: dict[int, int] = {}
        classes = []
        for i in range(len(subs)):
            if i in seen:
                continue
            orbit = sorted({self._conj_action[x][i] for x in range(self.order)})
            for j in orbit:
                seen[j] = len(classes)
            rep = Subgroup(self, subs[i])
            classes.append(SubgroupClass(
                index=len(classes), representative=rep,
                class_members=tuple(Subgroup(self, subs[j]) for j in orbit),
                normalizer=self.normalizer(rep)))
        self._class_of = seen
        return tuple(classes)

    def conjugacy_classes(self) -> list["SubgroupClass"]:
        return list(self._classes)

    def class_of(self, h: "Subgroup | int") -> int:
        """Index of the conjugacy class containing ``h`` (subgroup or subgroup index)."""
        self._classes
        i = h if isinstance(h, int) else self.subgroup_index(h)
        return self._class_of[i]

    def normalizer(self, h: "Subgroup") -> "Subgroup":
        hs = set(h.members)
        return Subgroup(self, tuple(
            x for x in range(self.order) if all(self.conj(x, a) in hs for a in h.members)))

    def is_subconjugate(self, k: "Subgroup", h: "Subgroup") -> Optional[int]:
        """First ``x`` (in element order) with ``x^-1 k x`` contained in ``h``."""
        hs = set(h.members)
        for x in range(self.order):
            xi = self.inverses[x]
            if all(self.conj(xi, a) in hs for a in k.members):
                return x
        return None


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup = field(repr=False)
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    def __contains__(self, a):
        return a in self.members

    @property
    def order(self) -> int:
        return len(self.members)

    def issubset(self, other: "Subgroup") -> bool:
        return set(self.members) <= set(other.members)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, tuple(sorted(set(self.members) & set(other.members))))

    @property
    def index(self) -> int:
        return self.group.subgroup_index(self)


@dataclass(frozen=True)
class SubgroupClass:
    """A conjugacy class of subgroups with its canonical representative."""

    index: int
    representative: Subgroup
    class_members: tuple[Subgroup, ...] = field(repr=False)
    normalizer: Subgroup = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.class_members)

    @cached_property
    def coset_reps(self) -> tuple[int, ...]:
        """Minimal element of each coset of the representative in its normalizer."""
        g = self.representative.group
        h = self.representative.members
        reps, seen = [], set()
        for n in self.normalizer.members:
            if n in seen:
                continue
            coset = {g.mul(n, a) for a in h}
            seen |= coset
            reps.append(min(coset))
        return tuple(reps)

    @cached_property
    def weyl(self) -> FiniteGroup:
        """The quotient N_G(H)/H, elements ordered by minimal coset member."""
        g = self.representative.group
        h = set(self.representative.members)
        reps = self.coset_reps
        where = {}
        for i, r in enumerate(reps):
            for a in h:
                where[g.mul(r, a)] = i
        table = [[where[g.mul(a, b)] for b in reps] for a in reps]
        return FiniteGroup(table, name=f"W({self.index})")


def subgroups(g: FiniteGroup) -> list[Subgroup]:
    return g.subgroups()


def conjugacy_classes_of_subgroups(g: FiniteGroup) -> list[SubgroupClass]:
    return g.conjugacy_classes()


def is_subconjugate(g: FiniteGroup, k: Subgroup, h: Subgroup) -> Optional[int]:
    return g.is_subconjugate(k, h)


def generating_set(g: FiniteGroup) -> list[int]:
    """A small generating set, chosen greedily in element order."""
    gens: list[int] = []
    current = (0,)
    for a in range(g.order):
        if len(current) == g.order:
            break
        if a not in current:
            gens.append(a)
            current = g.closure(gens)
    return gens


def from_table(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Validate a multiplication table; relabel so that the identity is 0."""
    try:
        rows = [list(map(int, row)) for row in table]
    except (TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad table: {exc}") from None
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise MalformedSpec("table must be a non-empty square array")
    if any(not (0 <= x < n) for r in rows for x in r):
        raise MalformedSpec("table entries must lie in 0..n-1")
    e = next((a for a in range(n)
              if all(rows[a][b] == b and rows[b][a] == b for b in range(n))), None)
    if e is None:
        raise MissingIdentity("no two-sided identity")
    if e != 0:
        swap = list(range(n))
        swap[0], swap[e] = e, 0
        rows = [[swap[rows[swap[a]][swap[b]]] for b in range(n)] for a in range(n)]
    return FiniteGroup(rows, name=name)


def _compose(p, q):
    # (p*q)(i) = p(q(i)): apply q first
    return tuple(p[i] for i in q)


def from_permutations(degree: int, generators: Sequence[Sequence[int]],
                      name: str = "") -> FiniteGroup:
    """Close permutation generators on ``{0..degree-1}`` into a group.

    Elements are sorted lexicographically as image tuples, so the identity
    permutation gets index 0.
    """
    ident = tuple(range(degree))
    gens = []
    for p in generators:
        p = tuple(int(x) for x in p)
        if sorted(p) != list(ident):
            raise MalformedSpec(f"{list(p)} is not a permutation of 0..{degree - 1}")
        gens.append(p)
    cap = max_order()
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for s in gens:
                b = _compose(a, s)
                if b not in elems:
                    elems.add(b)
                    new.append(b)
                    if len(elems) > cap:
                        raise OrderCapExceeded(f"group order exceeds cap {cap}")
        frontier = new
    perms = sorted(elems)
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[_compose(a, b)] for b in perms] for a in perms]
    return FiniteGroup(table, perms=perms, name=name)


def load_group(spec: dict) -> FiniteGroup:
    """Build a group from ``{"table": ...}`` or ``{"degree": d, "generators": ...}``."""
    if not isinstance(spec, dict):
        raise MalformedSpec("group spec must be an object")
    name = spec.get("name", "")
    if "table" in spec:
        table = spec["table"]
        if "order" in spec and spec["order"] != len(table):
            raise MalformedSpec("order does not match table size")
        return from_table(table, name=name)
    if "generators" in spec:
        degree = spec.get("degree")
        if not isinstance(degree, int) or degree < 0:
            raise MalformedSpec("permutation spec needs an integer degree")
        gens = spec["generators"]
        if not isinstance(gens, list) or any(
                not isinstance(p, list) or len(p) != degree for p in gens):
            raise MalformedSpec("generators must be lists of length degree")
        return from_permutations(degree, gens, name=name)
    raise MalformedSpec("group spec needs 'table' or 'generators'")
