"""Seeded cover generators for building test corpora."""

from __future__ import annotations

import hashlib
import itertools
import random

from .box import BoxShape, Cell
from .dichotomy import Cover
from .errors import InvalidInputError


def random_cover(shape: BoxShape, members: int, seed: int, overlap: float = 0.0) -> Cover:
    """Each cell goes to one uniformly random member, then joins each other
    member independently with probability ``overlap``."""
    if members < 1:
        raise InvalidInputError("need at least one member")
    if not 0.0 <= overlap <= 1.0:
        raise InvalidInputError("overlap must be a probability")
    rng = random.Random(seed)
    sets: list[list[Cell]] = [[] for _ in range(members)]
    for c in shape.cells():
        home = rng.randrange(members)
        for p in range(members):
            if p == home or (overlap and rng.random() < overlap):
                sets[p].append(c)
    return Cover.from_sets(shape, dict(enumerate(sets)))


def _hash_slot(seed: int, cell: Cell, parts: int) -> int:
    key = f"{seed}:{','.join(map(str, cell))}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big") % parts


def partition_cover(shape: BoxShape, parts: int, seed: int) -> Cover:
    """Disjoint cover: each cell is hashed with the seed into one of ``parts`` members."""
    if parts < 1:
        raise InvalidInputError("need at least one part")
    sets: list[list[Cell]] = [[] for _ in range(parts)]
    for c in shape.cells():
        sets[_hash_slot(seed, c, parts)].append(c)
    return Cover.from_sets(shape, dict(enumerate(sets)))


def grid_cover(shape: BoxShape, side: int) -> Cover:
    """Tiling by axis-aligned blocks of the given side, ids in row-major block order."""
    if side < 1:
        raise InvalidInputError("block side must be >= 1")
    blocks = list(itertools.product(*(range(-(-k // side)) for k in shape.dims)))
    slot = {b: i for i, b in enumerate(blocks)}
    sets: list[list[Cell]] = [[] for _ in blocks]
    for c in shape.cells():
        sets[slot[tuple(v // side for v in c)]].append(c)
    return Cover.from_sets(shape, dict(enumerate(sets)))
