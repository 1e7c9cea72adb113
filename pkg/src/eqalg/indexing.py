"""Transfer systems, indexing systems, and the norm categories they define.

A transfer system is stored as the full set of subgroup-index pairs ``(k, h)``
with ``K <= H`` (reflexive pairs and all conjugates included).  A G-map lies in
the corresponding indexing system iff for every point ``x`` the pair
``(Stab(x), Stab(f(x)))`` belongs to the relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .group import FiniteGroup, OrderCapExceeded, max_order
from .gsets import (GMap, GroupMismatch, coproduct, coset_reps, inclusions, orbit_g_set,
                    pullback, standard_orbit)
from .mackey import MapKey, compose_keys, orbit_map, orbit_map_keys

ENUMERATION_CAP = 12


class InvalidRelation(ValueError):
    pass


class InvalidIndexingSystem(ValueError):
    pass


# subgroup pair combinatorics

@lru_cache(maxsize=None)
def _inclusions(g: FiniteGroup) -> tuple[tuple[int, int], ...]:
    subs = [set(m) for m in g._subgroup_members]
    return tuple((k, h) for h in range(len(subs)) for k in range(len(subs))
                 if subs[k] <= subs[h])


@lru_cache(maxsize=None)
def _intersection_table(g: FiniteGroup) -> dict:
    subs = g._subgroup_members
    out = {}
    for a in range(len(subs)):
        for b in range(len(subs)):
            out[a, b] = g.subgroup_index(set(subs[a]) & set(subs[b]))
    return out


@lru_cache(maxsize=None)
def _below(g: FiniteGroup) -> dict:
    below: dict[int, list[int]] = {}
    for k, h in _inclusions(g):
        below.setdefault(h, []).append(k)
    return below


def _conjugate_pair(g: FiniteGroup, x: int, pair: tuple[int, int]) -> tuple[int, int]:
    return (g.conjugate_index(x, pair[0]), g.conjugate_index(x, pair[1]))


@lru_cache(maxsize=None)
def pair_orbits(g: FiniteGroup) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Non-reflexive inclusions grouped into simultaneous-conjugation orbits.

    Orbits are ordered by the order of the larger subgroup, then by decreasing
    order of the smaller one, so that every consequence of an orbit under the
    transfer-system axioms comes earlier or shares its larger subgroup.
    """
    subs = g._subgroup_members
    seen = set()
    orbits = []
    for pair in _inclusions(g):
        if pair[0] == pair[1] or pair in seen:
            continue
        orb = tuple(sorted({_conjugate_pair(g, x, pair) for x in range(g.order)}))
        seen.update(orb)
        orbits.append(orb)
    orbits.sort(key=lambda o: (len(subs[o[0][1]]), -len(subs[o[0][0]]), o[0]))
    return tuple(orbits)


def _reflexive(g: FiniteGroup) -> frozenset:
    return frozenset((i, i) for i in range(len(g._subgroup_members)))


def violations(g: FiniteGroup, rel: frozenset) -> list[tuple]:
    """Every failure of the transfer-system axioms, with witnesses."""
    out = []
    for k, h in rel:
        if not set(g._subgroup_members[k]) <= set(g._subgroup_members[h]):
            out.append(("not an inclusion", (k, h)))
    for i in range(len(g._subgroup_members)):
        if (i, i) not in rel:
            out.append(("reflexivity", (i, i)))
    for pair in rel:
        for x in range(g.order):
            c = _conjugate_pair(g, x, pair)
            if c not in rel:
                out.append(("conjugation", pair, x))
                break
    inter = _intersection_table(g)
    below = _below(g)
    for k, h in rel:
        for l in below.get(h, ()):
            if (inter[k, l], l) not in rel:
                out.append(("restriction", (k, h), l))
    by_source: dict[int, list[int]] = {}
    for k, h in rel:
        by_source.setdefault(k, []).append(h)
    for a, b in rel:
        for c in by_source.get(b, ()):
            if (a, c) not in rel:
                out.append(("transitivity", (a, b), (b, c)))
    return out


@dataclass(frozen=True)
class TransferSystem:
    group: FiniteGroup
    relation: frozenset

    def __post_init__(self):
        object.__setattr__(self, "relation", frozenset(self.relation))
        bad = violations(self.group, self.relation)
        if bad:
            raise InvalidRelation(f"not a transfer system: {bad[:3]}")

    def __le__(self, other: "TransferSystem") -> bool:
        return self.relation <= other.relation

    def __lt__(self, other: "TransferSystem") -> bool:
        return self.relation < other.relation

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.relation

    @cached_property
    def key(self) -> tuple:
        """Canonical sort key: sorted non-reflexive pairs."""
        return tuple(sorted(p for p in self.relation if p[0] != p[1]))

    def generating_pairs(self) -> list[tuple[int, int]]:
        """Non-reflexive pairs whose larger subgroup is a class representative."""
        g = self.group
        reps = {g.subgroup_index(c.representative) for c in g.conjugacy_classes()}
        return [p for p in self.key if p[1] in reps]

    def size(self) -> int:
        return len(self.key)


def closure(g: FiniteGroup, pairs: Iterable[tuple[int, int]]) -> frozenset:
    """Smallest transfer-system relation containing ``pairs``."""
    rel = set(_reflexive(g))
    todo = list(pairs)
    subs = g._subgroup_members
    for k, h in todo:
        if not set(subs[k]) <= set(subs[h]):
            raise InvalidRelation(f"{(k, h)} is not an inclusion")
    inter = _intersection_table(g)
    below = _below(g)
    while todo:
        pair = todo.pop()
        if pair in rel:
            continue
        new = {_conjugate_pair(g, x, pair) for x in range(g.order)}
        fresh = [p for p in new if p not in rel]
        rel.update(fresh)
        for k, h in fresh:
            for l in below.get(h, ()):
                todo.append((inter[k, l], l))
            for a, b in list(rel):
                if b == k:
                    todo.append((a, h))
                if a == h:
                    todo.append((k, b))
    return frozenset(rel)


def transfer_system(g: FiniteGroup, pairs: Iterable[tuple[int, int]] = ()) -> TransferSystem:
    """The transfer system generated by ``pairs``."""
    return TransferSystem(g, closure(g, pairs))


def minimal(g: FiniteGroup) -> TransferSystem:
    return TransferSystem(g, _reflexive(g))


def maximal(g: FiniteGroup) -> TransferSystem:
    return TransferSystem(g, frozenset(_inclusions(g)))


def lattice_ops(a: TransferSystem, b: TransferSystem) -> tuple[TransferSystem, TransferSystem]:
    """``(meet, join)``: intersection and the closure of the union."""
    if a.group != b.group:
        raise GroupMismatch("transfer systems over different groups")
    return (TransferSystem(a.group, a.relation & b.relation),
            TransferSystem(a.group, closure(a.group, a.relation | b.relation)))


# enumeration
#
# Transfer systems are unions of conjugation orbits of non-reflexive pairs, so
# they are enumerated as bitmasks with one bit per orbit (see pair_orbits).
# The axioms become implications between orbits: restriction has one premise,
# transitivity two.

class TooManyPairs(OrderCapExceeded):
    pass


@dataclass(frozen=True)
class PairRules:
    orbits: tuple
    restriction: tuple[tuple[int, int], ...]
    transitivity: tuple[tuple[int, int, int], ...]

    @property
    def n_vars(self) -> int:
        return len(self.orbits)


@lru_cache(maxsize=None)
def pair_rules(g: FiniteGroup) -> PairRules:
    orbits = pair_orbits(g)
    where = {p: n for n, orb in enumerate(orbits) for p in orb}
    inter = _intersection_table(g)
    below = _below(g)
    restriction = set()
    for n, orb in enumerate(orbits):
        k, h = orb[0]
        for l in below.get(h, ()):
            c = (inter[k, l], l)
            if c in where and where[c] != n:
                restriction.add((n, where[c]))
    by_source: dict[int, list[tuple[int, int]]] = {}
    for p in where:
        by_source.setdefault(p[0], []).append(p)
    transitivity = set()
    for a, b in where:
        for _, c in by_source.get(b, ()):
            transitivity.add((where[(a, b)], where[(b, c)], where[(a, c)]))
    return PairRules(orbits, tuple(sorted(restriction)), tuple(sorted(transitivity)))


def _check_cap(g: FiniteGroup):
    cap = max_order(ENUMERATION_CAP)
    if g.order > cap:
        raise OrderCapExceeded(f"group order {g.order} exceeds enumeration cap {cap}")
    n = len(pair_orbits(g))
    if n > 64:
        raise TooManyPairs(f"{n} pair orbits do not fit a 64-bit mask")


def _frozen(a: np.ndarray) -> np.ndarray:
    # results are cached, so hand out read-only arrays
    a.setflags(write=False)
    return a


def _bit(n: int) -> int:
    return 1 << n


@lru_cache(maxsize=8)
def exhaustive_masks(g: FiniteGroup) -> np.ndarray:
    """Search every include/exclude choice on pair orbits.

    A branch is cut exactly when some axiom instance has all of its orbits
    decided and is violated, so every complete choice that survives satisfies
    every axiom.  Result is sorted.
    """
    _check_cap(g)
    rules = pair_rules(g)
    due: dict[int, list[tuple[int, int]]] = {}
    for x, z in rules.restriction:
        due.setdefault(max(x, z), []).append((_bit(x), _bit(z)))
    for x, y, z in rules.transitivity:
        due.setdefault(max(x, y, z), []).append((_bit(x) | _bit(y), _bit(z)))
    ptr, prem, concl = [0], [], []
    for n in range(rules.n_vars):
        for pm, cm in due.get(n, ()):
            prem.append(pm)
            concl.append(cm)
        ptr.append(len(prem))
    out = _kernels.exhaustive(rules.n_vars, np.array(ptr, np.int64),
                              np.array(prem, np.uint64), np.array(concl, np.uint64))
    return _frozen(np.sort(out))


@lru_cache(maxsize=8)
def closure_masks(g: FiniteGroup) -> np.ndarray:
    """Branch on the least undecided orbit, closing under the axioms on inclusion.

    Every include step replaces the current set by its closure, so leaves are
    closed sets; an include branch dies when the closure hits an excluded orbit.
    Result is sorted.
    """
    _check_cap(g)
    rules = pair_rules(g)
    n = rules.n_vars
    restr = [0] * n
    for x, z in rules.restriction:
        restr[x] |= _bit(z)
    left: dict[int, list] = {}
    right: dict[int, list] = {}
    for x, y, z in rules.transitivity:
        left.setdefault(x, []).append((y, z))
        right.setdefault(y, []).append((x, z))

    def csr(table):
        ptr, a, b = [0], [], []
        for v in range(n):
            for p, q in table.get(v, ()):
                a.append(p)
                b.append(q)
            ptr.append(len(a))
        return np.array(ptr, np.int64), np.array(a, np.int64), np.array(b, np.int64)

    out = _kernels.closure_search(n, np.array(restr, np.uint64), *csr(left), *csr(right))
    return _frozen(np.sort(out))


def _rule_arrays(rules: PairRules) -> tuple[np.ndarray, np.ndarray]:
    prem = [_bit(x) for x, _ in rules.restriction]
    concl = [_bit(z) for _, z in rules.restriction]
    prem += [_bit(x) | _bit(y) for x, y, _ in rules.transitivity]
    concl += [_bit(z) for *_, z in rules.transitivity]
    return np.array(prem, np.uint64), np.array(concl, np.uint64)


def subset_scan_masks(g: FiniteGroup, max_vars: int = 24) -> np.ndarray:
    """Test every subset of pair orbits against every axiom instance (compiled)."""
    rules = pair_rules(g)
    if rules.n_vars > max_vars:
        raise TooManyPairs(f"{rules.n_vars} pair orbits: 2^{rules.n_vars} subsets is too many")
    masks = np.arange(1 << rules.n_vars, dtype=np.uint64)
    return masks[_kernels.implications_hold(masks, *_rule_arrays(rules))]


def axiom_scan_masks(g: FiniteGroup, max_vars: int = 12) -> np.ndarray:
    """Test every subset of pair orbits with :func:`violations` directly (slow, independent)."""
    n = len(pair_orbits(g))
    if n > max_vars:
        raise TooManyPairs(f"{n} pair orbits: 2^{n} subsets is too many")
    keep = [m for m in range(1 << n) if not violations(g, relation_from_mask(g, m))]
    return np.array(keep, np.uint64)


def relation_from_mask(g: FiniteGroup, mask: int) -> frozenset:
    orbits = pair_orbits(g)
    mask = int(mask)
    return _reflexive(g) | frozenset(
        p for n, orb in enumerate(orbits) if mask >> n & 1 for p in orb)


def mask_of(t: TransferSystem) -> int:
    return sum(_bit(n) for n, orb in enumerate(pair_orbits(t.group)) if orb[0] in t.relation)


def _systems(g: FiniteGroup, masks: np.ndarray) -> list[TransferSystem]:
    out = [TransferSystem(g, relation_from_mask(g, m)) for m in masks]
    return sorted(out, key=lambda t: (t.size(), t.key))


def enumerate_exhaustive(g: FiniteGroup) -> list[TransferSystem]:
    return _systems(g, exhaustive_masks(g))


def enumerate_closure(g: FiniteGroup) -> list[TransferSystem]:
    return _systems(g, closure_masks(g))


def count_transfer_systems(g: FiniteGroup, check: bool = True) -> int:
    masks = closure_masks(g)
    if check and not np.array_equal(masks, exhaustive_masks(g)):
        raise AssertionError("transfer system enumerations disagree")
    return len(masks)


def enumerate_transfer_systems(g: FiniteGroup, check: bool = True) -> list[TransferSystem]:
    """All transfer systems, ordered by size then pairs; both searches must agree."""
    masks = closure_masks(g)
    if check and not np.array_equal(masks, exhaustive_masks(g)):
        raise AssertionError("transfer system enumerations disagree")
    return _systems(g, masks)


# indexing systems

class IndexingSystem:
    """A class of G-maps given by a membership predicate."""

    def __init__(self, group: FiniteGroup, contains: Callable[[GMap], bool], name: str = ""):
        self.group = group
        self._contains = contains
        self.name = name

    def __contains__(self, f: GMap) -> bool:
        return self.contains(f)

    def __repr__(self):
        return f"IndexingSystem({self.name or '?'})"

    def contains(self, f: GMap) -> bool:
        if f.source.group != self.group:
            raise GroupMismatch("map over a different group")
        return bool(self._contains(f))


def map_pairs(f: GMap) -> list[tuple[int, int]]:
    """Stabilizer pairs ``(Stab(x), Stab(f(x)))`` at the base point of each source orbit."""
    g = f.source.group
    return [(g.subgroup_index(f.source.stabilizer(o.base)),
             g.subgroup_index(f.target.stabilizer(f.assignment[o.base])))
            for o in f.source.orbits]


@lru_cache(maxsize=None)
def key_variables(g: FiniteGroup) -> dict:
    """Pair-orbit bit deciding membership of each orbit map, or -1 if always admitted."""
    where = {p: n for n, orb in enumerate(pair_orbits(g)) for p in orb}
    out = {}
    for k in orbit_map_keys(g):
        (pair,) = map_pairs(orbit_map(g, k))
        out[k] = where.get(pair, -1)
    return out


def transfer_to_indexing(t: TransferSystem) -> IndexingSystem:
    g = t.group
    rel = t.relation

    def contains(f: GMap) -> bool:
        return all(pair in rel for pair in map_pairs(f))

    return IndexingSystem(g, contains, name=f"I{list(t.generating_pairs())}")


def indexing_to_transfer(i: IndexingSystem) -> TransferSystem:
    """Pairs ``K <= H`` whose projection ``G/K -> G/H`` lies in ``i``."""
    g = i.group
    subs = g._subgroup_members
    rel = set()
    for k, h in _inclusions(g):
        src, tgt = orbit_g_set(g, subs[k]), orbit_g_set(g, subs[h])
        proj = GMap(src, tgt, [tgt.action[r][0] for r in coset_reps(g, k)], check=False)
        if i.contains(proj):
            rel.add((k, h))
    return TransferSystem(g, frozenset(rel))


def all_maps(g: FiniteGroup) -> IndexingSystem:
    return IndexingSystem(g, lambda f: True, name="all")


def fold_maps(g: FiniteGroup) -> IndexingSystem:
    """Coproducts of codiagonals: maps injective on every orbit."""
    return IndexingSystem(g, lambda f: f.is_orbitwise_injective(), name="fold")


@dataclass
class IndexingReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_indexing_system(i: IndexingSystem) -> IndexingReport:
    """Exhaustive axiom check over maps between orbits and two-orbit G-sets."""
    g = i.group
    report = IndexingReport()
    keys = orbit_map_keys(g)
    maps = {k: orbit_map(g, k) for k in keys}
    member = {k: i.contains(f) for k, f in maps.items()}
    n = len(g.conjugacy_classes())
    # wide: all isomorphisms
    for k in keys:
        if k[0] == k[1]:
            report.checked += 1
            if not member[k]:
                report.failures.append(("isomorphism missing", k))
    # composition
    for phi in keys:
        for psi in keys:
            if phi[1] == psi[0] and member[phi] and member[psi]:
                report.checked += 1
                if not member[compose_keys(g, phi, psi)]:
                    report.failures.append(("composition", phi, psi))
    # pullback stability
    for f in keys:
        if not member[f]:
            continue
        for b in keys:
            if b[1] != f[1]:
                continue
            report.checked += 1
            # projection to the source of b is the pullback of f along b
            _, q, _ = pullback(maps[b], maps[f])
            if not i.contains(q):
                report.failures.append(("pullback", f, b))
    # coproducts: fold maps are members, and membership is decided orbitwise
    for c in range(n):
        x = standard_orbit(g, c)
        ia, ib = inclusions(x, x)
        fold = GMap(ia.target, x, list(range(x.size)) * 2, check=False)
        report.checked += 1
        if not i.contains(fold):
            report.failures.append(("codiagonal", c))
    for phi in keys:
        for psi in keys:
            if phi[1] != psi[1] or phi > psi:
                continue
            report.checked += 1
            a, b = maps[phi], maps[psi]
            joint = GMap(coproduct(a.source, b.source), a.target,
                         a.assignment + b.assignment, check=False)
            if i.contains(joint) != (member[phi] and member[psi]):
                report.failures.append(("coproduct creation", phi, psi))
    return report


# norm categories

class NormCategory:
    """Standard orbits with the equivariant maps admitted by an indexing system."""

    def __init__(self, indexing: IndexingSystem):
        self.indexing = indexing
        self.group = g = indexing.group
        self.objects = list(range(len(g.conjugacy_classes())))
        self.morphisms: list[MapKey] = [k for k in orbit_map_keys(g)
                                        if indexing.contains(orbit_map(g, k))]
        self._set = frozenset(self.morphisms)
        self.compose_table = {}
        for phi in self.morphisms:
            for psi in self.morphisms:
                if phi[1] == psi[0]:
                    chi = compose_keys(g, phi, psi)
                    self.compose_table[phi, psi] = chi

    def hom(self, i: int, j: int) -> list[MapKey]:
        return [k for k in self.morphisms if k[0] == i and k[1] == j]

    def __contains__(self, key) -> bool:
        return key in self._set

    def identity(self, i: int) -> MapKey:
        return (i, i, 0)

    def composable_pairs(self):
        return list(self.compose_table)

    def is_closed(self) -> bool:
        return all(chi in self._set for chi in self.compose_table.values())

    def is_groupoid(self) -> bool:
        return all(k[0] == k[1] for k in self.morphisms)

    def to_dot(self, name: str = "norm_category") -> str:
        labels = [f"G/H_{i}" for i in self.objects]
        lines = [f"digraph {name} {{"]
        for i in self.objects:
            lines.append(f'  n{i} [label="{labels[i]}"];')
        for n, (i, j, y) in enumerate(self.morphisms):
            lines.append(f'  n{i} -> n{j} [label="{n}:{y}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_norm_category(i: IndexingSystem | TransferSystem, verify: bool = True) -> NormCategory:
    if isinstance(i, TransferSystem):
        i = transfer_to_indexing(i)
    if verify:
        report = verify_indexing_system(i)
        if not report.ok:
            raise InvalidIndexingSystem(f"indexing axioms fail: {report.failures[:3]}")
    return NormCategory(i)


def hasse_dot(systems: Sequence[TransferSystem], name: str = "transfer_systems") -> str:
    """Hasse diagram of the inclusion order on ``systems``."""
    lines = [f"digraph {name} {{"]
    for n, t in enumerate(systems):
        lines.append(f'  t{n} [label="{n}: {len(t.key)} pairs"];')
    for a, ta in enumerate(systems):
        for b, tb in enumerate(systems):
            if ta < tb and not any(ta < tc < tb for tc in systems):
                lines.append(f"  t{a} -> t{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
