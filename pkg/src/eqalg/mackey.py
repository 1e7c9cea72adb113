"""Rational Mackey functors in generator form.

A Mackey functor assigns a Q-vector space ``M_i`` to each standard orbit
``G/H_i`` and, to every equivariant map ``phi: G/H_i -> G/H_j`` between
standard orbits, a restriction ``res[phi]: M_j -> M_i`` and a transfer
``tr[phi]: M_i -> M_j``.  Such a map is determined by the image ``y`` of the
base coset, so maps are keyed by ``(i, j, y)``.  Automorphisms of ``G/H_i``
carry the Weyl group action; values on arbitrary spans are assembled
orbitwise by :func:`evaluate_on_span`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .burnside import BurnsideElement, rational_idempotents
from .group import FiniteGroup, SubgroupClass
from .gsets import GMap, GSet, GroupMismatch, coset_reps, fixed_points, projections, pullback, standard_orbit
from .linalg import Matrix
from .spans import Span, backward_span, class_key, compose, decompose, forward_span, hom_set

MapKey = tuple[int, int, int]


class AxiomFailure(ValueError):
    def __init__(self, report):
        super().__init__(f"Mackey axioms fail: {report.failures[:3]}")
        self.report = report


class MalformedMackey(ValueError):
    pass


# orbit maps

@lru_cache(maxsize=None)
def orbit_map_keys(g: FiniteGroup) -> tuple[MapKey, ...]:
    """Every equivariant map between standard orbits, as ``(i, j, y)``."""
    classes = g.conjugacy_classes()
    keys = []
    for i, ci in enumerate(classes):
        for j in range(len(classes)):
            for y in fixed_points(standard_orbit(g, j), ci.representative):
                keys.append((i, j, y))
    return tuple(keys)


def orbit_map(g: FiniteGroup, key: MapKey) -> GMap:
    i, j, y = key
    src, tgt = standard_orbit(g, i), standard_orbit(g, j)
    reps = _reps(g, i)
    return GMap(src, tgt, [tgt.action[r][y] for r in reps], check=False)


def _reps(g: FiniteGroup, cls: int) -> tuple[int, ...]:
    rep = g.conjugacy_classes()[cls].representative
    return coset_reps(g, g.subgroup_index(rep))


def compose_keys(g: FiniteGroup, phi: MapKey, psi: MapKey) -> MapKey:
    """Key of ``psi o phi``."""
    i, j, y = phi
    j2, k, z = psi
    if j != j2:
        raise ValueError("maps are not composable")
    return (i, k, standard_orbit(g, k).action[_reps(g, j)[y]][z])


def inverse_key(g: FiniteGroup, phi: MapKey) -> MapKey:
    i, j, _ = phi
    for y in range(standard_orbit(g, i).size):
        cand = (j, i, y)
        if (j, i, y) in _key_set(g) and compose_keys(g, phi, cand) == (i, i, 0):
            return cand
    raise ValueError(f"{phi} is not an isomorphism")


@lru_cache(maxsize=None)
def _key_set(g: FiniteGroup) -> frozenset:
    return frozenset(orbit_map_keys(g))


def is_iso_key(g: FiniteGroup, key: MapKey) -> bool:
    return key[0] == key[1]


def weyl_key(cls: SubgroupClass, w: int) -> MapKey:
    """Automorphism ``gH -> g n^-1 H`` of ``G/H`` for the Weyl element ``w = nH``."""
    g = cls.representative.group
    n = cls.coset_reps[w]
    return (cls.index, cls.index, standard_orbit(g, cls.index).action[g.inv(n)][0])


def piece_key(src_orbit, tgt_orbit, f: GMap) -> MapKey:
    """Key of the map between standard orbits induced by ``f`` on one source orbit."""
    return (src_orbit.cls, tgt_orbit.cls, tgt_orbit.coset_of[f.assignment[src_orbit.base]])


# Mackey functors

@dataclass
class MackeyFunctor:
    group: FiniteGroup
    dims: tuple[int, ...]
    res: dict = field(repr=False)
    tr: dict = field(repr=False)

    def __post_init__(self):
        self.dims = tuple(self.dims)
        n = len(self.group.conjugacy_classes())
        if len(self.dims) != n:
            raise MalformedMackey(f"expected {n} dimensions, got {len(self.dims)}")
        keys = orbit_map_keys(self.group)
        for name, table, shape in (("res", self.res, lambda i, j: (self.dims[i], self.dims[j])),
                                   ("tr", self.tr, lambda i, j: (self.dims[j], self.dims[i]))):
            if set(table) != set(keys):
                raise MalformedMackey(f"{name} must be given on every orbit map")
            for (i, j, y), mat in table.items():
                rows, cols = shape(i, j)
                if len(mat) != rows or any(len(r) != cols for r in mat):
                    raise MalformedMackey(f"{name}{(i, j, y)} has the wrong shape")
                table[(i, j, y)] = [[Fraction(v) for v in r] for r in mat]

    def __eq__(self, other):
        return (isinstance(other, MackeyFunctor) and self.group == other.group
                and self.dims == other.dims and self.res == other.res and self.tr == other.tr)

    def dim_of(self, x: GSet) -> int:
        return sum(self.dims[c] for c in x.orbit_tags)


def zero_mackey(g: FiniteGroup) -> MackeyFunctor:
    n = len(g.conjugacy_classes())
    keys = orbit_map_keys(g)
    return MackeyFunctor(g, (0,) * n, {k: [] for k in keys}, {k: [] for k in keys})


def _offsets(m: MackeyFunctor, x: GSet) -> list[int]:
    out, acc = [], 0
    for o in x.orbits:
        out.append(acc)
        acc += m.dims[o.cls]
    return out


def _place(target: Matrix, block: Matrix, r0: int, c0: int):
    for i, row in enumerate(block):
        t = target[r0 + i]
        for j, v in enumerate(row):
            if v:
                t[c0 + j] += v


def restriction_along(m: MackeyFunctor, f: GMap) -> Matrix:
    """``M(target) -> M(source)`` for an arbitrary G-map."""
    x, z = f.target, f.source
    out = linalg.zeros(m.dim_of(z), m.dim_of(x))
    ox, oz = _offsets(m, x), _offsets(m, z)
    for k, orb in enumerate(z.orbits):
        t = x.orbit_of[f.assignment[orb.base]]
        _place(out, m.res[piece_key(orb, x.orbits[t], f)], oz[k], ox[t])
    return out


def transfer_along(m: MackeyFunctor, f: GMap) -> Matrix:
    """``M(source) -> M(target)`` for an arbitrary G-map."""
    y, z = f.target, f.source
    out = linalg.zeros(m.dim_of(y), m.dim_of(z))
    oy, oz = _offsets(m, y), _offsets(m, z)
    for k, orb in enumerate(z.orbits):
        t = y.orbit_of[f.assignment[orb.base]]
        _place(out, m.tr[piece_key(orb, y.orbits[t], f)], oy[t], oz[k])
    return out


def evaluate_on_span(m: MackeyFunctor, s: Span) -> Matrix:
    """Transfer along the forward leg after restriction along the backward leg."""
    if s.group != m.group:
        raise GroupMismatch("span and Mackey functor over different groups")
    r = restriction_along(m, s.back)
    t = transfer_along(m, s.fwd)
    return linalg.matmul(t, r, cols=m.dim_of(s.left))


@dataclass
class MackeyReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_axioms(m: MackeyFunctor) -> MackeyReport:
    """Identities, functoriality of res and tr, isomorphism duality, double cosets."""
    g = m.group
    keys = orbit_map_keys(g)
    report = MackeyReport()
    n = len(m.dims)
    for i in range(n):
        report.checked += 1
        ident = linalg.identity(m.dims[i])
        if m.res[(i, i, 0)] != ident or m.tr[(i, i, 0)] != ident:
            report.failures.append(("identity", i))
    by_target: dict[int, list[MapKey]] = {}
    by_source: dict[int, list[MapKey]] = {}
    for k in keys:
        by_target.setdefault(k[1], []).append(k)
        by_source.setdefault(k[0], []).append(k)
    for phi in keys:
        for psi in by_source.get(phi[1], []):
            report.checked += 1
            chi = compose_keys(g, phi, psi)
            i, k = phi[0], psi[1]
            if linalg.matmul(m.res[phi], m.res[psi], cols=m.dims[k]) != m.res[chi]:
                report.failures.append(("res composition", phi, psi))
            if linalg.matmul(m.tr[psi], m.tr[phi], cols=m.dims[i]) != m.tr[chi]:
                report.failures.append(("tr composition", phi, psi))
        if phi[0] == phi[1]:
            report.checked += 1
            if m.res[phi] != m.tr[inverse_key(g, phi)]:
                report.failures.append(("conjugation", phi))
    for k in range(n):
        into = by_target.get(k, [])
        for phi in into:
            for psi in into:
                report.checked += 1
                lhs = linalg.matmul(m.res[phi], m.tr[psi], cols=m.dims[psi[0]])
                _, p_phi, p_psi = pullback(orbit_map(g, phi), orbit_map(g, psi))
                rhs = evaluate_on_span(m, Span(p_psi, p_phi))
                if lhs != rhs:
                    report.failures.append(
                        ("double coset", {"K": phi[0], "L": psi[0], "H": k,
                                          "maps": (phi, psi)}))
    return report


# constructions

@lru_cache(maxsize=None)
def local_burnside_basis(g: FiniteGroup, cls: int) -> tuple[int, ...]:
    """Subgroups of ``H_cls`` up to ``H_cls``-conjugacy (least subgroup index of each class)."""
    h = g.conjugacy_classes()[cls].representative.members
    hs = set(h)
    out, seen = [], set()
    for si, members in enumerate(g._subgroup_members):
        if si in seen or not set(members) <= hs:
            continue
        seen.update(g.conjugate_index(a, si) for a in h)
        out.append(si)
    return tuple(out)


def _local_position(g: FiniteGroup, cls: int, sub: int) -> int:
    h = g.conjugacy_classes()[cls].representative.members
    rep = min(g.conjugate_index(a, sub) for a in h)
    return local_burnside_basis(g, cls).index(rep)


def burnside_mackey(g: FiniteGroup) -> MackeyFunctor:
    """``G/H -> A(H) (x) Q`` with res by double cosets and tr by induction."""
    classes = g.conjugacy_classes()
    n = len(classes)
    dims = tuple(len(local_burnside_basis(g, i)) for i in range(n))
    subs = g._subgroup_members
    res, tr = {}, {}
    for key in orbit_map_keys(g):
        i, j, y = key
        gy = _reps(g, j)[y]
        gy_inv = g.inv(gy)
        hi = set(classes[i].representative.members)
        hj = classes[j].representative.members
        k_conj = [g.conj(gy_inv, a) for a in hi]
        r = linalg.zeros(dims[i], dims[j])
        for col, s in enumerate(local_burnside_basis(g, j)):
            s_members = subs[s]
            seen = set()
            for h in hj:
                if h in seen:
                    continue
                seen.update(g.mul(g.mul(k, h), t) for k in k_conj for t in s_members)
                x = g.mul(gy, h)
                stab = tuple(sorted(hi & {g.conj(x, t) for t in s_members}))
                r[_local_position(g, i, g.subgroup_index(stab))][col] += 1
        t = linalg.zeros(dims[j], dims[i])
        for col, s in enumerate(local_burnside_basis(g, i)):
            conj = g.conjugate_index(gy_inv, s)
            t[_local_position(g, j, conj)][col] += 1
        res[key], tr[key] = r, t
    return MackeyFunctor(g, dims, res, tr)


def represented_mackey(x: GSet) -> MackeyFunctor:
    """``G/H -> Q{hom_set(G/H, x)}`` with res and tr by composing spans."""
    g = x.group
    n = len(g.conjugacy_classes())
    bases = [hom_set(standard_orbit(g, i), x) for i in range(n)]
    lookup = [{class_key(s): k for k, s in enumerate(b)} for b in bases]
    dims = tuple(len(b) for b in bases)

    def coords(cls: int, s: Span) -> list[int]:
        v = [0] * dims[cls]
        for piece in decompose(s):
            v[lookup[cls][class_key(piece)]] += 1
        return v

    res, tr = {}, {}
    for key in orbit_map_keys(g):
        i, j, _ = key
        phi = orbit_map(g, key)
        fs, bs = forward_span(phi), backward_span(phi)
        res_cols = [coords(i, compose(u, fs)) for u in bases[j]]
        tr_cols = [coords(j, compose(u, bs)) for u in bases[i]]
        res[key] = linalg.transpose(linalg.to_fractions(res_cols), dims[i]) if res_cols \
            else linalg.zeros(dims[i], 0)
        tr[key] = linalg.transpose(linalg.to_fractions(tr_cols), dims[j]) if tr_cols \
            else linalg.zeros(dims[j], 0)
    return MackeyFunctor(g, dims, res, tr)


def burnside_action(a: BurnsideElement, m: MackeyFunctor) -> list[Matrix]:
    """Action of ``a`` on each level through ``G/H <- G/H x X -> G/H``."""
    if a.group != m.group:
        raise GroupMismatch("Burnside element and Mackey functor over different groups")
    g = m.group
    out = []
    for i in range(len(m.dims)):
        acc = linalg.zeros(m.dims[i], m.dims[i])
        for k, c in enumerate(a.coeffs):
            if c:
                _, p1, _ = projections(standard_orbit(g, i), standard_orbit(g, k))
                acc = linalg.add(acc, linalg.scale(c, evaluate_on_span(m, Span(p1, p1))))
        out.append(acc)
    return out


def subfunctor(m: MackeyFunctor, bases: Sequence[Matrix]) -> MackeyFunctor:
    """Restrict ``m`` to the levelwise subspaces spanned by the columns of ``bases``."""
    widths = [len(b[0]) if b and b[0] else 0 for b in bases]
    res, tr = {}, {}
    for key in orbit_map_keys(m.group):
        i, j, _ = key
        img = linalg.matmul(m.res[key], bases[j], cols=widths[j])
        r = linalg.solve(bases[i], img, m.dims[i]) if m.dims[i] else []
        img = linalg.matmul(m.tr[key], bases[i], cols=widths[i])
        t = linalg.solve(bases[j], img, m.dims[j]) if m.dims[j] else []
        if r is None or t is None:
            raise ValueError(f"subspaces are not stable under {key}")
        res[key] = r if widths[i] else []
        tr[key] = t if widths[j] else []
    return MackeyFunctor(m.group, tuple(widths), res, tr)


def split(m: MackeyFunctor) -> list[tuple[SubgroupClass, MackeyFunctor]]:
    """Pieces ``e_H . M`` for every subgroup class."""
    report = check_axioms(m)
    if not report.ok:
        raise AxiomFailure(report)
    g = m.group
    out = []
    for cls, e in zip(g.conjugacy_classes(), rational_idempotents(g)):
        proj = burnside_action(e, m)
        bases = [linalg.column_space(p, m.dims[i]) for i, p in enumerate(proj)]
        out.append((cls, subfunctor(m, bases)))
    return out


@dataclass
class WeylModule:
    cls: SubgroupClass
    dim: int
    # action[w]: matrix of Weyl element w, in Weyl group element order
    action: tuple
    quotient_basis: tuple[int, ...] = ()

    @property
    def weyl(self) -> FiniteGroup:
        return self.cls.weyl

    def generators(self) -> list[int]:
        from .group import generating_set
        return generating_set(self.weyl)

    def check_relations(self) -> bool:
        w = self.weyl
        return all(linalg.matmul(self.action[a], self.action[b], cols=self.dim)
                   == self.action[w.mul(a, b)]
                   for a in range(w.order) for b in range(w.order))


def geometric_fixed_points(m: MackeyFunctor, h: SubgroupClass | int) -> WeylModule:
    """``M(G/H)`` modulo transfers from proper subgroups, with the induced Weyl action."""
    report = check_axioms(m)
    if not report.ok:
        raise AxiomFailure(report)
    g = m.group
    cls = g.conjugacy_classes()[h if isinstance(h, int) else h.index]
    c = cls.index
    d = m.dims[c]
    order = cls.representative.order
    classes = g.conjugacy_classes()
    images = [m.tr[k] for k in orbit_map_keys(g)
              if k[1] == c and classes[k[0]].representative.order < order]
    img = linalg.column_space(linalg.hstack(images, d), d) if images else [[] for _ in range(d)]
    img_dim = len(img[0]) if img and img[0] else 0
    quot = linalg.complement_basis(img, d)
    full = linalg.hstack([img, [[Fraction(int(r == q)) for q in quot] for r in range(d)]], d)
    action = []
    for w in range(cls.weyl.order):
        rho = m.tr[weyl_key(cls, w)]
        moved = [[rho[r][q] for q in quot] for r in range(d)]
        coords = linalg.solve(full, moved, d) if d else []
        action.append([row for row in coords[img_dim:]] if d else [])
    return WeylModule(cls, len(quot), tuple(action), tuple(quot))
