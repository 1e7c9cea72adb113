"""Spans ``X <- Z -> Y`` of finite G-sets, composed by pullback.

Spans are identified up to isomorphism of the apex commuting with both legs.
An apex orbit over the product ``X x Y`` is determined up to such isomorphism
by the orbit of its image in ``X x Y`` together with the conjugacy class of
its stabilizer inside the stabilizer of that image; :func:`class_key` records
exactly this data, while :func:`span_isomorphism` produces an explicit witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .gsets import (GMap, GSet, GroupMismatch, canonical_form, coproduct_all,
                    coset_reps, identity_map, inclusions, orbit_g_set, pullback)


class ObjectMismatch(ValueError):
    pass


class BoundaryMismatch(ValueError):
    pass


class HomSetTooLarge(RuntimeError):
    pass


HOM_SET_CAP = 100_000


class Span:
    """``left <-back- apex -fwd-> right``."""

    def __init__(self, back: GMap, fwd: GMap):
        if back.source != fwd.source:
            raise ValueError("span legs must share their source")
        if back.target.group != fwd.target.group:
            raise GroupMismatch("span boundaries carry different groups")
        self.back = back
        self.fwd = fwd

    @property
    def left(self) -> GSet:
        return self.back.target

    @property
    def right(self) -> GSet:
        return self.fwd.target

    @property
    def apex(self) -> GSet:
        return self.back.source

    @property
    def group(self):
        return self.apex.group

    def __repr__(self):
        return (f"Span({self.left.canonical_tags} <- {self.apex.orbit_tags} -> "
                f"{self.right.canonical_tags})")

    def reversed(self) -> "Span":
        return Span(self.fwd, self.back)


def identity_span(x: GSet) -> Span:
    return Span(identity_map(x), identity_map(x))


def backward_span(f: GMap) -> Span:
    """``B <-f- A -id-> A`` for ``f: A -> B`` (restriction along ``f``)."""
    return Span(f, identity_map(f.source))


def forward_span(f: GMap) -> Span:
    """``A <-id- A -f-> B`` for ``f: A -> B`` (transfer along ``f``)."""
    return Span(identity_map(f.source), f)


def canonical(s: Span) -> Span:
    """Same span with the apex replaced by its canonical form."""
    _, iso = canonical_form(s.apex)
    inv = iso.inverse()
    return Span(inv.then(s.back), inv.then(s.fwd))


def compose(s2: Span, s1: Span) -> Span:
    """``s2 o s1`` for ``s1: X => Y`` and ``s2: Y => W``."""
    if s1.right != s2.left:
        raise ObjectMismatch("right object of s1 differs from left object of s2")
    _, p1, p2 = pullback(s1.fwd, s2.back)
    return canonical(Span(p1.then(s1.back), p2.then(s2.fwd)))


def _base_points(s: Span):
    """Per apex orbit: (orbit, image of its base point in left and right)."""
    return [(o, s.back.assignment[o.base], s.fwd.assignment[o.base]) for o in s.apex.orbits]


def _pair_orbit_min(x: GSet, y: GSet, a: int, b: int) -> tuple[int, int, int]:
    """Least point of the orbit of ``(a, b)`` in ``x * y`` and the first element reaching it."""
    best = None
    for g in range(x.group.order):
        pt = (x.action[g][a], y.action[g][b])
        if best is None or pt < best[:2]:
            best = (pt[0], pt[1], g)
    return best


def _stab_pair(x: GSet, y: GSet, a: int, b: int) -> tuple[int, ...]:
    return tuple(g for g in range(x.group.order)
                 if x.action[g][a] == a and y.action[g][b] == b)


def _min_conjugate(g, sub: int, within: Sequence[int]) -> int:
    return min(g.conjugate_index(x, sub) for x in within)


def class_key(s: Span) -> tuple:
    """Complete invariant of the span up to equivalence."""
    g = s.group
    x, y = s.left, s.right
    classes = g.conjugacy_classes()
    keys = []
    for o, a, b in _base_points(s):
        a2, b2, t = _pair_orbit_min(x, y, a, b)
        sub = g.conjugate_index(t, g.subgroup_index(classes[o.cls].representative))
        keys.append((a2, b2, _min_conjugate(g, sub, _stab_pair(x, y, a2, b2))))
    return tuple(sorted(keys))


def span_isomorphism(s: Span, t: Span) -> Optional[GMap]:
    """Apex isomorphism ``phi`` with ``t.back o phi = s.back`` and ``t.fwd o phi = s.fwd``.

    Orbits are matched one at a time; being matchable is an equivalence
    relation on orbits, so a greedy choice never needs to be undone.
    """
    if s.left != t.left or s.right != t.right:
        raise BoundaryMismatch("spans have different boundary objects")
    if s.apex.canonical_tags != t.apex.canonical_tags:
        return None
    g = s.group
    classes = g.conjugacy_classes()
    za, zb = s.apex, t.apex
    used = set()
    phi = [0] * za.size
    for o, a, b in _base_points(s):
        stab = za.stabilizer(o.base)
        match = None
        for k, o2 in enumerate(zb.orbits):
            if k in used or o2.cls != o.cls:
                continue
            for q in o2.points:
                if (t.back.assignment[q] == a and t.fwd.assignment[q] == b
                        and zb.stabilizer(q) == stab):
                    match = (k, q)
                    break
            if match:
                break
        if match is None:
            return None
        used.add(match[0])
        reps = coset_reps(g, g.subgroup_index(classes[o.cls].representative))
        for p, c in o.coset_of.items():
            phi[p] = zb.action[reps[c]][match[1]]
    return GMap(za, zb, phi, check=False)


def spans_equivalent(s: Span, t: Span) -> bool:
    return span_isomorphism(s, t) is not None


def decompose(s: Span) -> list[Span]:
    """One span per apex orbit, each with a transitive apex."""
    out = []
    for o in s.apex.orbits:
        pts = o.points
        sub_action = []
        index = {p: i for i, p in enumerate(pts)}
        for row in s.apex.action:
            sub_action.append([index[row[p]] for p in pts])
        z = GSet(s.group, sub_action)
        out.append(Span(GMap(z, s.left, [s.back.assignment[p] for p in pts], check=False),
                        GMap(z, s.right, [s.fwd.assignment[p] for p in pts], check=False)))
    return out


# constraints

def _all(f: GMap) -> bool:
    return True


def _iso(f: GMap) -> bool:
    return f.is_bijective()


def _fold(f: GMap) -> bool:
    return f.is_orbitwise_injective()


BUILTIN_PREDICATES: dict[str, Callable[[GMap], bool]] = {
    "all": _all,
    "iso": _iso,
    "fold": _fold,
}


@dataclass(frozen=True)
class TripleConstraint:
    """Wide subcategories allowed for backward and forward legs."""

    backward: Callable[[GMap], bool] = _all
    forward: Callable[[GMap], bool] = _all
    name: str = field(default="all/all", compare=False)

    @classmethod
    def named(cls, backward: str = "all", forward: str = "all") -> "TripleConstraint":
        return cls(BUILTIN_PREDICATES[backward], BUILTIN_PREDICATES[forward],
                   name=f"{backward}/{forward}")

    def admits(self, s: Span) -> bool:
        return self.backward(s.back) and self.forward(s.fwd)


ALL = TripleConstraint.named("all", "all")


def _orbit_pieces(x: GSet, y: GSet, o) -> list[tuple[GSet, list[int], list[int]]]:
    """Transitive G-sets over ``o x Y`` up to isomorphism, with both legs."""
    g = x.group
    a = o.base
    stab_a = set(x.stabilizer(a))
    seen_y = set()
    pieces = []
    for b in range(y.size):
        if b in seen_y:
            continue
        seen_y.update(y.action[h][b] for h in stab_a)
        a2, b2, _ = _pair_orbit_min(x, y, a, b)
        stab = _stab_pair(x, y, a2, b2)
        stab_set = set(stab)
        done = set()
        for si, members in enumerate(g._subgroup_members):
            if si in done or not set(members) <= stab_set:
                continue
            done.update(g.conjugate_index(h, si) for h in stab)
            z = orbit_g_set(g, members)
            reps = coset_reps(g, si)
            pieces.append((z, [x.action[r][a2] for r in reps], [y.action[r][b2] for r in reps]))
    return pieces


def hom_set(x: GSet, y: GSet, c: TripleConstraint = ALL, per_orbit: int = 1) -> list[Span]:
    """Span classes ``x <= z => y`` with ``per_orbit`` apex orbits over each orbit of ``x``.

    With the default ``per_orbit=1`` these are the spans whose backward leg is
    a bijection on orbit sets: the transitive spans when ``x`` is an orbit, and
    tuples of them in general, so that counts multiply over coproducts in ``x``.
    """
    if x.group != y.group:
        raise GroupMismatch("hom_set between G-sets over different groups")
    g = x.group
    per_orbit_choices = []
    total = 1
    for o in x.orbits:
        pieces = _orbit_pieces(x, y, o)
        combos = list(itertools.combinations_with_replacement(range(len(pieces)), per_orbit))
        per_orbit_choices.append([[pieces[i] for i in cmb] for cmb in combos])
        total *= len(combos)
        if total > HOM_SET_CAP:
            raise HomSetTooLarge(f"more than {HOM_SET_CAP} candidate spans")
    out = []
    for pick in itertools.product(*per_orbit_choices):
        parts = [p for group in pick for p in group]
        apex = coproduct_all(g, [p[0] for p in parts])
        back = [v for p in parts for v in p[1]]
        fwd = [v for p in parts for v in p[2]]
        s = Span(GMap(apex, x, back, check=False), GMap(apex, y, fwd, check=False))
        if c.admits(s):
            out.append(canonical(s))
    return out


def index_in(spans: Sequence[Span], s: Span) -> Optional[int]:
    key = class_key(s)
    for i, t in enumerate(spans):
        if class_key(t) == key:
            return i
    return None


@dataclass
class SemiadditiveReport:
    lhs: int
    rhs_x: int
    rhs_y: int
    splitting_bijective: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs_x * self.rhs_y and self.splitting_bijective


def check_semiadditive(x: GSet, y: GSet, z: GSet, c: TripleConstraint = ALL) -> SemiadditiveReport:
    """Compare ``hom(x + y, z)`` with ``hom(x, z) * hom(y, z)`` via the inclusion spans."""
    hx = hom_set(x, z, c)
    hy = hom_set(y, z, c)
    ix, iy = inclusions(x, y)
    hxy = hom_set(ix.target, z, c)
    keys_x = {class_key(s): i for i, s in enumerate(hx)}
    keys_y = {class_key(s): i for i, s in enumerate(hy)}
    sx, sy = forward_span(ix), forward_span(iy)
    images = set()
    failures = []
    for s in hxy:
        pair = (keys_x.get(class_key(compose(s, sx))), keys_y.get(class_key(compose(s, sy))))
        if None in pair:
            failures.append(("restriction outside hom set", s))
        images.add(pair)
    bij = not failures and len(images) == len(hxy) == len(hx) * len(hy)
    return SemiadditiveReport(len(hxy), len(hx), len(hy), bij, failures)


@dataclass
class AdequacyReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_adequate(c: TripleConstraint, corpus: Sequence[GMap]) -> AdequacyReport:
    """Pullback of a backward map along a forward map stays in class, on every corpus pair."""
    report = AdequacyReport()
    for f in corpus:
        if not c.forward(f):
            continue
        for b in corpus:
            if not c.backward(b) or b.target != f.target:
                continue
            report.checked += 1
            _, pb, pf = pullback(f, b)
            if not c.backward(pb):
                report.failures.append(("backward", f, b))
            if not c.forward(pf):
                report.failures.append(("forward", f, b))
    return report
