"""Small named groups used throughout the tests and the CLI."""

from __future__ import annotations

from .group import FiniteGroup, from_permutations, from_table


def cyclic(n: int) -> FiniteGroup:
    if n == 1:
        return from_table([[0]], name="C1")
    return from_permutations(n, [[(i + 1) % n for i in range(n)]], name=f"C{n}")


def trivial() -> FiniteGroup:
    return cyclic(1)


def symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        return from_table([[0]], name=f"S{n}")
    gens = [[1, 0] + list(range(2, n))]
    if n > 2:
        gens.append([(i + 1) % n for i in range(n)])
    return from_permutations(n, gens, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    # generated by the 3-cycles (0 1 k)
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(p)
    return from_permutations(n, gens, name=f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon (order 2n)."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return from_permutations(n, [rot, ref], name=f"D{2 * n}")


def direct_product(a: FiniteGroup, b: FiniteGroup, name: str = "") -> FiniteGroup:
    m = b.order
    table = [[a.mul(x // m, y // m) * m + b.mul(x % m, y % m)
              for y in range(a.order * m)] for x in range(a.order * m)]
    return FiniteGroup(table, name=name or f"{a.name}x{b.name}")


def quaternion() -> FiniteGroup:
    # left regular action on (1, i, -1, -i, j, -k, -j, k)
    i = [1, 2, 3, 0, 5, 6, 7, 4]
    j = [4, 7, 6, 5, 2, 1, 0, 3]
    return from_permutations(8, [i, j], name="Q8")


def klein_four() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2), name="C2xC2")


def small_groups(max_order: int = 8) -> list[FiniteGroup]:
    """One representative of every isomorphism type up to order 8."""
    c2 = cyclic(2)
    groups = [
        trivial(), c2, cyclic(3), cyclic(4), klein_four(), cyclic(5),
        cyclic(6), symmetric(3), cyclic(7), cyclic(8),
        direct_product(cyclic(4), c2, name="C4xC2"),
        direct_product(klein_four(), c2, name="C2xC2xC2"),
        dihedral(4), quaternion(),
    ]
    return [g for g in groups if g.order <= max_order]


def by_name(name: str) -> FiniteGroup:
    """Parse names like ``C4``, ``S3``, ``D8``, ``A4``, ``Q8``, ``C2xC2``."""
    parts = name.split("x")
    if len(parts) > 1:
        out = by_name(parts[0])
        for p in parts[1:]:
            out = direct_product(out, by_name(p))
        out.name = name
        return out
    kind, num = name[0].upper(), name[1:]
    if kind == "Q" and num == "8":
        return quaternion()
    if kind == "V" and num == "4":
        return klein_four()
    n = int(num)
    if kind == "C":
        return cyclic(n)
    if kind == "S":
        return symmetric(n)
    if kind == "A":
        return alternating(n)
    if kind == "D":
        return dihedral(n // 2)
    raise ValueError(f"unknown group name {name!r}")
