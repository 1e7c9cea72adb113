"""Normed algebra diagrams: functors from a norm category to graded-commutative Q-algebras.

A diagram assigns an algebra to each standard orbit and an algebra map to
every admitted orbit map ``phi: G/H_i -> G/H_j``, covariantly, so that
``X(psi o phi) = X(psi) X(phi)``.  Algebras are finite dimensional, Z-graded,
with an optional square-zero differential of degree -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from . import linalg
from .group import FiniteGroup
from .indexing import (IndexingSystem, NormCategory, TransferSystem, build_norm_category,
                       indexing_to_transfer, key_variables, pair_orbits)
from .linalg import Matrix
from .mackey import MapKey, compose_keys, orbit_map_keys

Vector = tuple[Fraction, ...]


class InvalidAlgebra(ValueError):
    pass


class InvalidAlgebraMap(ValueError):
    pass


class NotASubSystem(ValueError):
    pass


class UnboundedSearch(RuntimeError):
    pass


# graded algebras

def _sign(a: int, b: int) -> int:
    return -1 if (a * b) % 2 else 1


class GradedAlgebra:
    """Finite-dimensional Z-graded algebra over Q with explicit structure constants.

    Basis elements are ordered by degree, then by position within the degree.
    ``products`` maps ``(i, j, k)`` to the coefficient of ``e_k`` in ``e_i e_j``;
    ``differential[k][i]`` is the coefficient of ``e_k`` in ``d(e_i)``.
    """

    def __init__(self, dims: Mapping[int, int], products: Mapping[tuple[int, int, int], object],
                 unit: Sequence, differential: Optional[Sequence[Sequence]] = None,
                 name: str = "", check: bool = True):
        self.dims = {int(d): int(n) for d, n in sorted(dims.items()) if int(n) != 0}
        if any(n < 0 for n in self.dims.values()):
            raise InvalidAlgebra("negative dimension")
        self.degrees: tuple[int, ...] = tuple(d for d, n in self.dims.items() for _ in range(n))
        self.dim = len(self.degrees)
        self.products: dict[tuple[int, int, int], Fraction] = {}
        for (i, j, k), q in products.items():
            q = Fraction(q)
            if q:
                self.products[int(i), int(j), int(k)] = q
        self._table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j, k), q in self.products.items():
            self._table.setdefault((i, j), {})[k] = q
        self.unit: Vector = tuple(Fraction(c) for c in unit)
        self.differential: Optional[Matrix] = (
            None if differential is None else linalg.to_fractions(differential))
        self.name = name
        if check:
            bad = self.validate()
            if bad:
                raise InvalidAlgebra("; ".join(bad[:3]))

    def __eq__(self, other):
        if not isinstance(other, GradedAlgebra):
            return NotImplemented
        return (self.dims == other.dims and self.products == other.products
                and self.unit == other.unit and self._d_matrix() == other._d_matrix())

    def __hash__(self):
        return hash((tuple(self.dims.items()), tuple(sorted(self.products.items())), self.unit))

    def __repr__(self):
        return f"GradedAlgebra({self.name or self.dims})"

    def offset(self, degree: int) -> int:
        return sum(n for d, n in self.dims.items() if d < degree)

    def positions(self, degree: int) -> range:
        start = self.offset(degree)
        return range(start, start + self.dims.get(degree, 0))

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def mul(self, u: Sequence, v: Sequence) -> Vector:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if b:
                    for k, q in self._table.get((i, j), {}).items():
                        out[k] += a * b * q
        return tuple(out)

    def _d_matrix(self) -> Matrix:
        if self.differential is None:
            return linalg.zeros(self.dim, self.dim)
        return self.differential

    def d(self, v: Sequence) -> Vector:
        m = self._d_matrix()
        return tuple(sum((m[k][i] * v[i] for i in range(self.dim)), Fraction(0))
                     for k in range(self.dim))

    def validate(self) -> list[str]:
        """Every failed axiom, as text; empty when the algebra is valid."""
        n = self.dim
        deg = self.degrees
        bad = []
        if len(self.unit) != n:
            return [f"unit has length {len(self.unit)}, expected {n}"]
        for (i, j, k) in self.products:
            if not all(0 <= x < n for x in (i, j, k)):
                return [f"structure constant {(i, j, k)} out of range"]
            if deg[k] != deg[i] + deg[j]:
                bad.append(f"product {(i, j, k)} is not homogeneous")
        if any(c and deg[k] != 0 for k, c in enumerate(self.unit)):
            bad.append("unit is not in degree 0")
        if self.differential is not None:
            d = self.differential
            if len(d) != n or any(len(row) != n for row in d):
                return bad + ["differential has the wrong shape"]
            for k in range(n):
                for i in range(n):
                    if d[k][i] and deg[k] != deg[i] - 1:
                        bad.append(f"differential entry {(k, i)} has degree != -1")
        if bad:
            return bad
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            if self.mul(self.unit, e[i]) != e[i] or self.mul(e[i], self.unit) != e[i]:
                bad.append(f"unit law fails at e_{i}")
        prod = [[self.mul(e[i], e[j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i, n):
                s = _sign(deg[i], deg[j])
                if prod[i][j] != tuple(s * c for c in prod[j][i]):
                    bad.append(f"graded commutativity fails at {(i, j)}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.mul(prod[i][j], e[k]) != self.mul(e[i], prod[j][k]):
                        bad.append(f"associativity fails at {(i, j, k)}")
        if self.differential is not None:
            de = [self.d(v) for v in e]
            for i in range(n):
                if any(self.d(de[i])):
                    bad.append(f"d o d != 0 at e_{i}")
            for i in range(n):
                for j in range(n):
                    lhs = self.d(prod[i][j])
                    a = self.mul(de[i], e[j])
                    b = self.mul(e[i], de[j])
                    s = _sign(deg[i], 1)
                    if lhs != tuple(x + s * y for x, y in zip(a, b)):
                        bad.append(f"Leibniz rule fails at {(i, j)}")
        return bad


def rationals() -> GradedAlgebra:
    """The ground field Q in degree 0."""
    return GradedAlgebra({0: 1}, {(0, 0, 0): 1}, [1], name="Q")


def truncated_polynomial(degree: int, height: int) -> GradedAlgebra:
    """``Q[x]/(x^height)`` with ``|x| = degree``."""
    if height < 1:
        raise InvalidAlgebra("height must be positive")
    dims: dict[int, int] = {}
    for p in range(height):
        dims[p * degree] = dims.get(p * degree, 0) + 1
    order = sorted(range(height), key=lambda p: (p * degree, p))
    pos = {p: n for n, p in enumerate(order)}
    products = {(pos[a], pos[b], pos[a + b]): 1
                for a in range(height) for b in range(height) if a + b < height}
    unit = [int(n == pos[0]) for n in range(height)]
    return GradedAlgebra(dims, products, unit, name=f"Q[x]/(x^{height}), |x|={degree}")


def dual_numbers() -> GradedAlgebra:
    """``Q[x]/(x^2)`` with ``|x| = 0``."""
    return truncated_polynomial(0, 2)


def acyclic_pair() -> GradedAlgebra:
    """``Q[x]/(x^2) (x) Lambda(y)`` with ``|x| = 0``, ``|y| = 1`` and ``dy = x``."""
    # basis: 1, x (degree 0); y, xy (degree 1)
    products = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (0, 2, 2): 1, (2, 0, 2): 1,
                (0, 3, 3): 1, (3, 0, 3): 1, (1, 2, 3): 1, (2, 1, 3): 1}
    d = linalg.zeros(4, 4)
    d[1][2] = Fraction(1)
    return GradedAlgebra({0: 2, 1: 2}, products, [1, 0, 0, 0], differential=d,
                         name="Q[x]/(x^2) (x) L(y), dy=x")


# algebra maps

class AlgebraMap:
    """Degree-preserving linear map given by one matrix per degree."""

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra,
                 blocks: Mapping[int, Sequence[Sequence]]):
        self.source = source
        self.target = target
        self.blocks: dict[int, Matrix] = {}
        full = linalg.zeros(target.dim, source.dim)
        for d, block in blocks.items():
            d = int(d)
            rows, cols = target.dims.get(d, 0), source.dims.get(d, 0)
            block = linalg.to_fractions(block)
            if len(block) != rows or any(len(r) != cols for r in block):
                raise InvalidAlgebraMap(f"block in degree {d} is not {rows}x{cols}")
            if rows and cols:
                self.blocks[d] = block
                r0, c0 = target.offset(d), source.offset(d)
                for r in range(rows):
                    for c in range(cols):
                        full[r0 + r][c0 + c] = block[r][c]
        self.matrix = full

    def __eq__(self, other):
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.matrix == other.matrix)

    def __repr__(self):
        return f"AlgebraMap({self.source!r} -> {self.target!r})"

    def apply(self, v: Sequence) -> Vector:
        return tuple(sum((row[i] * v[i] for i in range(self.source.dim)), Fraction(0))
                     for row in self.matrix)

    def then(self, other: "AlgebraMap") -> "AlgebraMap":
        """``other o self``."""
        if self.target != other.source:
            raise InvalidAlgebraMap("maps are not composable")
        m = linalg.matmul(other.matrix, self.matrix, self.target.dim, self.source.dim)
        return AlgebraMap.from_matrix(self.source, other.target, m)

    @classmethod
    def from_matrix(cls, source: GradedAlgebra, target: GradedAlgebra, m: Matrix) -> "AlgebraMap":
        blocks = {}
        for d in set(source.dims) & set(target.dims):
            blocks[d] = [[m[r][c] for c in source.positions(d)] for r in target.positions(d)]
        out = cls(source, target, blocks)
        if out.matrix != linalg.to_fractions(m):
            raise InvalidAlgebraMap("matrix does not preserve degrees")
        return out

    def validate(self) -> list[str]:
        bad = []
        s, t = self.source, self.target
        if self.apply(s.unit) != t.unit:
            bad.append("unit not preserved")
        e = [s.basis_vector(i) for i in range(s.dim)]
        images = [self.apply(v) for v in e]
        for i in range(s.dim):
            for j in range(s.dim):
                if self.apply(s.mul(e[i], e[j])) != t.mul(images[i], images[j]):
                    bad.append(f"product not preserved at {(i, j)}")
        if s.differential is not None or t.differential is not None:
            for i in range(s.dim):
                if self.apply(s.d(e[i])) != t.d(images[i]):
                    bad.append(f"differential not preserved at e_{i}")
        return bad


def identity_map(a: GradedAlgebra) -> AlgebraMap:
    return AlgebraMap(a, a, {d: linalg.identity(n) for d, n in a.dims.items()})


def unit_map(a: GradedAlgebra) -> AlgebraMap:
    """The unit ``Q -> a``."""
    return AlgebraMap.from_matrix(rationals(), a, [[c] for c in a.unit])


# diagrams

@dataclass
class DiagramFailure:
    kind: str
    pair: tuple[MapKey, MapKey]
    detail: str = ""


@dataclass
class DiagramReport:
    checked: int = 0
    failures: list[DiagramFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


class NormedAlgebraDiagram:
    def __init__(self, norm_category: NormCategory, objects: Mapping[int, GradedAlgebra],
                 morphisms: Mapping[MapKey, AlgebraMap]):
        self.norm_category = norm_category
        self.objects = dict(objects)
        self.morphisms = {tuple(k): f for k, f in morphisms.items()}

    @property
    def group(self) -> FiniteGroup:
        return self.norm_category.group


def validate_diagram(d: NormedAlgebraDiagram) -> DiagramReport:
    """Check every object, morphism and composition square.

    Each failure names a composable pair: object failures use ``(id, id)``
    and a bad map ``phi`` out of ``G/H_i`` is reported at ``(id_i, phi)``.
    """
    n = d.norm_category
    report = DiagramReport()
    ids = {i: n.identity(i) for i in n.objects}
    for i in n.objects:
        report.checked += 1
        a = d.objects.get(i)
        if a is None:
            report.failures.append(DiagramFailure("missing object", (ids[i], ids[i])))
            continue
        for msg in a.validate():
            report.failures.append(DiagramFailure("invalid algebra", (ids[i], ids[i]), msg))
    for k in d.morphisms:
        if k not in n:
            i = k[0] if k[0] in ids else n.objects[0]
            report.failures.append(DiagramFailure("morphism outside category", (ids[i], k)))
    good = {}
    for k in n.morphisms:
        report.checked += 1
        pair = (ids[k[0]], k)
        f = d.morphisms.get(k)
        if f is None:
            report.failures.append(DiagramFailure("missing morphism", pair))
            continue
        src, tgt = d.objects.get(k[0]), d.objects.get(k[1])
        if f.source != src or f.target != tgt:
            report.failures.append(DiagramFailure("wrong endpoints", pair))
            continue
        msgs = f.validate()
        if k == ids[k[0]] and f.matrix != linalg.identity(src.dim):
            msgs.append("identity not sent to the identity map")
        for msg in msgs:
            report.failures.append(DiagramFailure("invalid algebra map", pair, msg))
        good[k] = f
    for (phi, psi), chi in n.compose_table.items():
        report.checked += 1
        if phi not in good or psi not in good:
            continue
        if chi not in good:
            report.failures.append(DiagramFailure("composite outside category", (phi, psi)))
            continue
        m = linalg.matmul(good[psi].matrix, good[phi].matrix)
        if m != good[chi].matrix:
            report.failures.append(DiagramFailure(
                "composition", (phi, psi), f"X({chi}) != X({psi}) X({phi})"))
    return report


def constant_diagram(a: GradedAlgebra, n: NormCategory) -> NormedAlgebraDiagram:
    bad = a.validate()
    if bad:
        raise InvalidAlgebra("; ".join(bad[:3]))
    ident = identity_map(a)
    return NormedAlgebraDiagram(n, {i: a for i in n.objects}, {k: ident for k in n.morphisms})


def perturbed(d: NormedAlgebraDiagram, key: MapKey, entry: tuple[int, int] = (0, 0),
              delta=1) -> NormedAlgebraDiagram:
    """Copy of ``d`` with one matrix entry of ``X(key)`` shifted by ``delta``.

    The entry must lie in a degree block; the result is usually not a functor.
    """
    f = d.morphisms[key]
    m = [row[:] for row in f.matrix]
    r, c = entry
    m[r][c] += Fraction(delta)
    morphisms = dict(d.morphisms)
    morphisms[key] = AlgebraMap.from_matrix(f.source, f.target, m)
    return NormedAlgebraDiagram(d.norm_category, d.objects, morphisms)


def forget_norms(d: NormedAlgebraDiagram, smaller: IndexingSystem | TransferSystem,
                 verify: bool = True) -> NormedAlgebraDiagram:
    """Restrict ``d`` to the norm category of a smaller indexing system."""
    big = indexing_to_transfer(d.norm_category.indexing)
    small = smaller if isinstance(smaller, TransferSystem) else indexing_to_transfer(smaller)
    if small.group != big.group or not small <= big:
        raise NotASubSystem("target transfer system is not contained in the diagram's")
    n = build_norm_category(smaller, verify=verify)
    return NormedAlgebraDiagram(n, d.objects, {k: d.morphisms[k] for k in n.morphisms})


# natural transformations

UNKNOWN_CAP = 48


@dataclass
class Transformation:
    components: dict[int, AlgebraMap]


def hom_diagrams(d1: NormedAlgebraDiagram, d2: NormedAlgebraDiagram) -> list[Transformation]:
    """Every natural transformation ``d1 => d2`` through algebra maps.

    The components are solved for exactly; the solution set must be finite
    and is restricted to rational points.
    """
    import sympy

    n = d1.norm_category
    if set(n.morphisms) != set(d2.norm_category.morphisms) or n.group != d2.group:
        raise ValueError("diagrams live on different norm categories")
    unknowns = []
    mats: dict[int, list[list]] = {}
    for i in n.objects:
        a, b = d1.objects[i], d2.objects[i]
        m = [[sympy.Integer(0)] * a.dim for _ in range(b.dim)]
        for deg in set(a.dims) & set(b.dims):
            for r in b.positions(deg):
                for c in a.positions(deg):
                    m[r][c] = sympy.Symbol(f"t_{i}_{r}_{c}")
                    unknowns.append(m[r][c])
        mats[i] = m
    if len(unknowns) > UNKNOWN_CAP:
        raise UnboundedSearch(f"{len(unknowns)} unknowns exceed the cap of {UNKNOWN_CAP}")

    def q(x):
        return sympy.Rational(x.numerator, x.denominator)

    def apply(m, v):
        return [sum((m[r][c] * v[c] for c in range(len(v))), sympy.Integer(0))
                for r in range(len(m))]

    def mul(alg, u, v):
        out = [sympy.Integer(0)] * alg.dim
        for (i, j, k), c in alg.products.items():
            out[k] += q(c) * u[i] * v[j]
        return out

    def mat(f):
        return [[q(x) for x in row] for row in f.matrix]

    eqs = []
    for i in n.objects:
        a, b, m = d1.objects[i], d2.objects[i], mats[i]
        e = [[q(x) for x in a.basis_vector(k)] for k in range(a.dim)]
        images = [apply(m, v) for v in e]
        eqs += [x - q(y) for x, y in zip(apply(m, [q(c) for c in a.unit]), b.unit)]
        for s in range(a.dim):
            for t in range(a.dim):
                lhs = apply(m, [q(c) for c in a.mul(a.basis_vector(s), a.basis_vector(t))])
                eqs += [x - y for x, y in zip(lhs, mul(b, images[s], images[t]))]
        if a.differential is not None or b.differential is not None:
            da, db = mat_d(a, q), mat_d(b, q)
            for s in range(a.dim):
                eqs += [x - y for x, y in zip(apply(m, apply(da, e[s])), apply(db, images[s]))]
    for k in n.morphisms:
        f1, f2 = mat(d1.morphisms[k]), mat(d2.morphisms[k])
        src, tgt = mats[k[0]], mats[k[1]]
        for c in range(d1.objects[k[0]].dim):
            col = [row[c] for row in f1]
            v = [sympy.Integer(int(r == c)) for r in range(d1.objects[k[0]].dim)]
            eqs += [x - y for x, y in zip(apply(tgt, col), apply(f2, apply(src, v)))]
    eqs = [sympy.expand(x) for x in eqs]
    eqs = [x for x in eqs if x != 0]
    if not unknowns:
        sols = [] if eqs else [{}]
    elif any(not x.free_symbols for x in eqs):
        sols = []
    else:
        sols = sympy.solve(eqs, unknowns, dict=True)
    out = []
    for sol in sols:
        values = {u: sympy.sympify(sol.get(u, u)) for u in unknowns}
        if any(v.free_symbols for v in values.values()):
            raise UnboundedSearch("infinitely many transformations")
        if not all(v.is_Rational for v in values.values()):
            continue
        comps = {}
        for i in n.objects:
            a, b = d1.objects[i], d2.objects[i]
            m = [[Fraction(int(sympy.fraction(values.get(x, x))[0]),
                           int(sympy.fraction(values.get(x, x))[1])) for x in row]
                 for row in mats[i]]
            comps[i] = AlgebraMap.from_matrix(a, b, m)
        out.append(Transformation(comps))
    return out


def mat_d(a: GradedAlgebra, q) -> list[list]:
    return [[q(x) for x in row] for row in a._d_matrix()]


# batched validation of constant diagrams

def composition_rules(g: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    """Implications ``bits(phi) | bits(psi) -> bit(psi o phi)`` over pair-orbit masks."""
    var = key_variables(g)
    keys = orbit_map_keys(g)
    rules = set()
    for phi in keys:
        for psi in keys:
            if phi[1] != psi[0]:
                continue
            z = var[compose_keys(g, phi, psi)]
            if z < 0:
                continue
            prem = 0
            for v in (var[phi], var[psi]):
                if v >= 0:
                    prem |= 1 << v
            if not prem >> z & 1:
                rules.add((prem, 1 << z))
    rules = sorted(rules)
    return (np.array([r[0] for r in rules], np.uint64),
            np.array([r[1] for r in rules], np.uint64))


def validate_constant_masks(g: FiniteGroup, masks: np.ndarray, a: Optional[GradedAlgebra] = None
                            ) -> np.ndarray:
    """Validity of the constant diagram at ``a`` for every transfer-system mask.

    Every square of a constant diagram reads ``id o id = id``, so the diagram
    is a functor exactly when ``a`` is valid and the admitted maps contain the
    identities and are closed under composition.  Identities are always
    admitted; closure is checked per mask with compiled implications.
    """
    a = rationals() if a is None else a
    if a.validate():
        return np.zeros(len(masks), np.bool_)
    assert len(pair_orbits(g)) <= 64
    prem, concl = composition_rules(g)
    return _kernels.implications_hold(np.asarray(masks, np.uint64), prem, concl)
