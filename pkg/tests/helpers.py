"""Random G-sets, maps and spans for property tests."""

from __future__ import annotations

import random

from eqalg.gsets import GMap, GSet, coset_reps, fixed_points, from_orbits
from eqalg.spans import Span


def random_gset(rng: random.Random, g, max_orbits: int = 2, allow_empty: bool = True) -> GSet:
    n = len(g.conjugacy_classes())
    k = _count(rng, max_orbits, allow_empty)
    return from_orbits(g, [rng.randrange(n) for _ in range(k)])


def _count(rng: random.Random, most: int, allow_empty: bool = True) -> int:
    # empty sets are legal but only interesting now and then
    if allow_empty and rng.random() < 0.1:
        return 0
    return rng.randint(1, most)


def _image(rng: random.Random, z: GSet, y: GSet) -> list[int] | None:
    g = z.group
    out = [0] * z.size
    for o in z.orbits:
        choices = fixed_points(y, z.stabilizer(o.base))
        if not choices:
            return None
        a = rng.choice(choices)
        reps = coset_reps(g, g.subgroup_index(z.stabilizer(o.base)))
        for p, k in o.coset_of.items():
            out[p] = y.action[reps[k]][a]
    return out


def random_map(rng: random.Random, z: GSet, y: GSet) -> GMap | None:
    img = _image(rng, z, y)
    return None if img is None else GMap(z, y, img)


def random_span(rng: random.Random, x: GSet, y: GSet, max_orbits: int = 2) -> Span:
    """Span ``x <- z -> y`` with a random apex of at most ``max_orbits`` orbits."""
    g = x.group
    classes = g.conjugacy_classes()
    ok = [c.index for c in classes
          if fixed_points(x, c.representative.members) and fixed_points(y, c.representative.members)]
    tags = [rng.choice(ok) for _ in range(_count(rng, max_orbits))] if ok else []
    z = from_orbits(g, tags)
    return Span(random_map(rng, z, x), random_map(rng, z, y))
