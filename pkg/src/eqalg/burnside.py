"""The rational Burnside ring A(G) (x) Q in the basis of orbits ``[G/H]``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .group import FiniteGroup
from .gsets import GSet, GroupMismatch, product, standard_orbit, table_of_marks


@dataclass(frozen=True)
class BurnsideElement:
    group: FiniteGroup
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.group.conjugacy_classes()):
            raise ValueError("one coefficient per subgroup class is required")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def _same(self, other):
        if self.group != other.group:
            raise GroupMismatch("Burnside elements of different groups")

    def __add__(self, other):
        self._same(other)
        return BurnsideElement(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return BurnsideElement(self.group, tuple(Fraction(c) * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, BurnsideElement):
            return multiply(self, other)
        return other * self

    def __repr__(self):
        terms = [f"{c}[{i}]" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def basis(g: FiniteGroup, i: int) -> BurnsideElement:
    n = len(g.conjugacy_classes())
    return BurnsideElement(g, tuple(int(j == i) for j in range(n)))


def one(g: FiniteGroup) -> BurnsideElement:
    return basis(g, len(g.conjugacy_classes()) - 1)


def zero(g: FiniteGroup) -> BurnsideElement:
    return BurnsideElement(g, (0,) * len(g.conjugacy_classes()))


def from_gset(x: GSet) -> BurnsideElement:
    coeffs = [0] * len(x.group.conjugacy_classes())
    for c in x.orbit_tags:
        coeffs[c] += 1
    return BurnsideElement(x.group, tuple(coeffs))


@lru_cache(maxsize=None)
def _marks_table(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    return tuple(map(tuple, table_of_marks(g)))


def marks(x: BurnsideElement) -> tuple[Fraction, ...]:
    t = _marks_table(x.group)
    n = len(t)
    return tuple(sum((x.coeffs[i] * t[i][j] for i in range(n)), Fraction(0)) for j in range(n))


@lru_cache(maxsize=None)
def _structure_constants(g: FiniteGroup) -> tuple:
    # consts[i][j]: orbit counts of G/H_i x G/H_j by class
    n = len(g.conjugacy_classes())
    return tuple(
        tuple(tuple(from_gset(product(standard_orbit(g, i), standard_orbit(g, j))).coeffs)
              for j in range(n))
        for i in range(n))


def multiply(x: BurnsideElement, y: BurnsideElement) -> BurnsideElement:
    """Product induced by the cartesian product of G-sets."""
    x._same(y)
    consts = _structure_constants(x.group)
    n = len(x.coeffs)
    out = [Fraction(0)] * n
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(y.coeffs):
            if b:
                for k, m in enumerate(consts[i][j]):
                    if m:
                        out[k] += a * b * m
    return BurnsideElement(x.group, tuple(out))


def from_marks(g: FiniteGroup, values: Sequence) -> BurnsideElement:
    """The element whose marks are ``values`` (row vector times the inverse table)."""
    t = linalg.to_fractions(_marks_table(g))
    n = len(t)
    # c * T = v  <=>  T^t c^t = v^t
    sol = linalg.solve(linalg.transpose(t), [[Fraction(v)] for v in values], n)
    return BurnsideElement(g, tuple(row[0] for row in sol))


def rational_idempotents(g: FiniteGroup) -> list[BurnsideElement]:
    """Primitive idempotents ``e_H``, one per class, defined by their marks."""
    n = len(g.conjugacy_classes())
    return [from_marks(g, [int(j == i) for j in range(n)]) for i in range(n)]


def permits_denominators(x: BurnsideElement, inverted_primes: Sequence[int]) -> bool:
    """True iff every coefficient lies in Z with only ``inverted_primes`` inverted."""
    for c in x.coeffs:
        d = c.denominator
        for p in inverted_primes:
            while d % p == 0:
                d //= p
        if d != 1:
            return False
    return True
