"""Seeded problem instances shared by the certify and acceptance tests."""

from __future__ import annotations

import random

from coarsehex.box import BoxShape
from coarsehex.certify import EBoxMap
from coarsehex.coarse import AbstractCover, Entourage, GroundSet, cover_multiplicity, product_entourage


def line(k, r):
    return Entourage.from_distance(GroundSet.range(k), lambda a, b: abs(a - b), r)


def grid_space(a, b):
    """Chebyshev radius-1 entourage on the ``a x b`` grid."""
    return product_entourage([line(a, 1), line(b, 1)])


def _stretch(rng, k, extra):
    """Monotone surjection ``{0..k+extra-1} -> {0..k-1}`` with steps of 0 or 1."""
    steps = [1] * (k - 1) + [0] * extra
    rng.shuffle(steps)
    out, v = [0], 0
    for s in steps:
        v += s
        out.append(v)
    return out


def banded_instance(seed, max_side=8):
    """An E-box into a grid and a band cover of multiplicity <= 2 at scale ``E``.

    Bands run along one axis with widths >= 2 and boundaries that wiggle by
    at most one cell per step; candidates whose multiplicity exceeds 2 are
    resampled, falling back to straight bands.
    """
    rng = random.Random(seed)
    a, b = rng.randint(2, max_side), rng.randint(2, max_side)
    E = grid_space(a, b)
    ax = rng.randrange(2)
    dims = (a, b)
    length, across = dims[ax], dims[1 - ax]
    merge = rng.random() < 0.3
    for attempt in range(20):
        cuts, pos = [], rng.randint(2, 3)
        while pos < length - 1:
            cuts.append(pos)
            pos += rng.randint(2, 4)
        wiggle = attempt < 19
        bounds = []
        for c in cuts:
            walk, v = [], c
            for _ in range(across):
                walk.append(v)
                if wiggle:
                    v = min(max(v + rng.choice((-1, 0, 1)), 1), length - 1)
            bounds.append(walk)
        members = {}
        for x in E.ground:
            t, o = x[ax], x[1 - ax]
            band = sum(1 for walk in bounds if walk[o] <= t)
            key = band % 2 if merge else band
            members.setdefault(str(key), set()).add(x)
        cov = AbstractCover(E.ground, members)
        if cover_multiplicity(E, cov)[0] <= 2:
            break
    else:  # pragma: no cover
        raise AssertionError("straight bands must have multiplicity <= 2")
    sa, sb = _stretch(rng, a, rng.randint(0, 2)), _stretch(rng, b, rng.randint(0, 2))
    shape = BoxShape((len(sa), len(sb)))
    f = EBoxMap(shape, E.ground, {c: (sa[c[0]], sb[c[1]]) for c in shape.cells()})
    return f, E, cov
