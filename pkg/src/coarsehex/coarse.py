"""Finite coarse-space primitives at a single fixed scale.

An ``Entourage`` is a reflexive, symmetric relation on a finite
``GroundSet``.  It is stored as one ball (a frozenset of element indices) per
element, whatever form it was built from: explicit pairs, a distance table
with a radius, or a finite generator set of a permutation action.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Sequence

from ._ids import id_sort_key
from .errors import InvalidInputError

logger = logging.getLogger(__name__)


def freeze_label(label: Any) -> Hashable:
    if isinstance(label, list):
        return tuple(freeze_label(v) for v in label)
    return label


def thaw_label(label: Any) -> Any:
    if isinstance(label, tuple):
        return [thaw_label(v) for v in label]
    return label


@dataclass(frozen=True)
class GroundSet:
    """A finite set of distinct hashable labels with a fixed index order."""

    labels: tuple[Hashable, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        labels = tuple(freeze_label(v) for v in self.labels)
        if not labels:
            raise InvalidInputError("ground set must be nonempty")
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise InvalidInputError("ground set labels must be unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", index)

    @classmethod
    def range(cls, k: int) -> "GroundSet":
        return cls(tuple(range(k)))

    @classmethod
    def product(cls, factors: Sequence["GroundSet"]) -> "GroundSet":
        """Cartesian product; labels are tuples, index order is row-major."""
        return cls(tuple(itertools.product(*(f.labels for f in factors))))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        try:
            return freeze_label(label) in self._index
        except TypeError:
            return False

    def index(self, label: Any) -> int:
        try:
            return self._index[freeze_label(label)]
        except (KeyError, TypeError):
            raise InvalidInputError(f"{label!r} is not in the ground set") from None

    def to_json(self) -> list:
        return [thaw_label(v) for v in self.labels]

    @classmethod
    def from_json(cls, obj: Any) -> "GroundSet":
        if not isinstance(obj, list):
            raise InvalidInputError("ground set must be a JSON array of labels")
        return cls(tuple(obj))


@dataclass(frozen=True)
class PermutationAction:
    """Finitely many bijections of a ground set, given as index tables."""

    ground: GroundSet
    generators: tuple[tuple[int, ...], ...]
    inverses: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        size = len(self.ground)
        gens = tuple(tuple(int(v) for v in g) for g in self.generators)
        invs = []
        for g in gens:
            if sorted(g) != list(range(size)):
                raise InvalidInputError(f"generator {g} is not a permutation of {size} points")
            inv = [0] * size
            for i, gi in enumerate(g):
                inv[gi] = i
            invs.append(tuple(inv))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "inverses", tuple(invs))

    def to_json(self) -> dict[str, Any]:
        return {"ground": self.ground.to_json(), "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, obj: Any) -> "PermutationAction":
        if not isinstance(obj, dict) or "ground" not in obj or "generators" not in obj:
            raise InvalidInputError("action must have 'ground' and 'generators'")
        return cls(GroundSet.from_json(obj["ground"]), tuple(obj["generators"]))


class Entourage:
    """Reflexive symmetric relation on a finite ground set.

    Build with ``from_pairs``, ``from_metric``, ``diagonal`` or
    ``group_entourage``.  ``kind`` and ``payload`` remember the generating
    form for serialization; equality compares the relation only.
    """

    def __init__(self, ground: GroundSet, balls: Sequence[Iterable[int]], kind: str = "pairs", payload: dict | None = None):
        self.ground = ground
        self.balls: tuple[frozenset[int], ...] = tuple(frozenset(b) for b in balls)
        self.kind = kind
        self.payload = payload or {}
        if len(self.balls) != len(ground):
            raise InvalidInputError("one ball per ground element is required")
        for i, b in enumerate(self.balls):
            if i not in b:
                raise InvalidInputError(f"relation is not reflexive at {ground.labels[i]!r}")
            for j in b:
                if i not in self.balls[j]:
                    raise InvalidInputError("relation is not symmetric")

    @classmethod
    def diagonal(cls, ground: GroundSet) -> "Entourage":
        return cls(ground, [{i} for i in range(len(ground))])

    @classmethod
    def from_pairs(cls, ground: GroundSet, pairs: Iterable[tuple[Any, Any]]) -> "Entourage":
        """Symmetric, reflexive closure of the given label pairs."""
        balls = [{i} for i in range(len(ground))]
        for x, y in pairs:
            i, j = ground.index(x), ground.index(y)
            balls[i].add(j)
            balls[j].add(i)
        return cls(ground, balls)

    @classmethod
    def from_index_balls(cls, ground: GroundSet, balls: Sequence[Iterable[int]]) -> "Entourage":
        """Symmetric closure of index balls (each ball gets its own index added)."""
        out = [set(b) | {i} for i, b in enumerate(balls)]
        for i, b in enumerate(list(out)):
            for j in b:
                out[j].add(i)
        return cls(ground, out)

    @classmethod
    def from_metric(cls, ground: GroundSet, distances: Sequence[Sequence[float]], radius: float) -> "Entourage":
        """``{(x, y) : d(x, y) <= radius}`` for a symmetric distance table."""
        size = len(ground)
        if radius < 0:
            raise InvalidInputError("radius must be >= 0")
        if len(distances) != size or any(len(row) != size for row in distances):
            raise InvalidInputError(f"distance table must be {size}x{size}")
        for i in range(size):
            if distances[i][i] != 0:
                raise InvalidInputError("distance table needs a zero diagonal")
            for j in range(i):
                if distances[i][j] != distances[j][i] or distances[i][j] < 0:
                    raise InvalidInputError("distance table must be symmetric and >= 0")
        balls = [[j for j in range(size) if distances[i][j] <= radius] for i in range(size)]
        payload = {"distances": [list(r) for r in distances], "radius": radius}
        return cls(ground, balls, "metric", payload)

    @classmethod
    def from_distance(cls, ground: GroundSet, dist, radius: float) -> "Entourage":
        """Metric form with the table computed from ``dist(label, label)``."""
        table = [[dist(a, b) for b in ground.labels] for a in ground.labels]
        return cls.from_metric(ground, table, radius)

    def ball(self, x: Any) -> frozenset:
        """``E[x]``: labels related to ``x``."""
        labels = self.ground.labels
        return frozenset(labels[j] for j in self.balls[self.ground.index(x)])

    def related(self, x: Any, y: Any) -> bool:
        return self.ground.index(y) in self.balls[self.ground.index(x)]

    def pairs(self) -> list[tuple[int, int]]:
        """Canonical sorted index pairs ``i < j`` (the diagonal is implicit)."""
        return sorted((i, j) for i, b in enumerate(self.balls) for j in b if i < j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Entourage):
            return NotImplemented
        return self.ground == other.ground and self.balls == other.balls

    def __le__(self, other: "Entourage") -> bool:
        return self.ground == other.ground and all(a <= b for a, b in zip(self.balls, other.balls))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Entourage(kind={self.kind!r}, size={len(self.ground)}, pairs={len(self.pairs())})"

    def to_json(self) -> dict[str, Any]:
        if self.kind == "metric":
            return {"kind": "metric", "ground": self.ground.to_json(), **self.payload}
        if self.kind == "group":
            return {"kind": "group", **self.payload}
        return {
            "kind": "pairs",
            "ground": self.ground.to_json(),
            "pairs": [list(p) for p in self.pairs()],
        }

    @classmethod
    def from_json(cls, obj: Any) -> "Entourage":
        if not isinstance(obj, dict):
            raise InvalidInputError("entourage must be a JSON object")
        kind = obj.get("kind")
        try:
            if kind == "pairs":
                ground = GroundSet.from_json(obj["ground"])
                balls: list[set[int]] = [{i} for i in range(len(ground))]
                for i, j in obj["pairs"]:
                    if not (0 <= i < len(ground) and 0 <= j < len(ground)):
                        raise InvalidInputError(f"pair index out of range: {[i, j]}")
                    balls[i].add(j)
                    balls[j].add(i)
                return cls(ground, balls)
            if kind == "metric":
                return cls.from_metric(
                    GroundSet.from_json(obj["ground"]), obj["distances"], obj["radius"]
                )
            if kind == "group":
                action = PermutationAction.from_json(obj["action"])
                return group_entourage(action, obj.get("generators"), obj.get("word_length", 1))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed {kind} entourage: {exc}") from exc
        raise InvalidInputError(f"unknown entourage kind {kind!r}")


@dataclass(frozen=True)
class AbstractCover:
    """An id-indexed family of nonempty subsets of a ground set covering it."""

    ground: GroundSet
    members: Mapping[str, frozenset]
    dropped: tuple[str, ...] = field(default=(), compare=False)
    index_sets: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        kept: dict[str, frozenset] = {}
        dropped = list(self.dropped)
        for raw_id, labels in self.members.items():
            mid = str(raw_id)
            if mid in kept or mid in dropped:
                raise InvalidInputError(f"duplicate member id {mid!r}")
            labels = frozenset(freeze_label(v) for v in labels)
            for v in labels:
                self.ground.index(v)
            if not labels:
                dropped.append(mid)
                logger.warning("dropping empty cover member %r", mid)
                continue
            kept[mid] = labels
        ordered = {k: kept[k] for k in sorted(kept, key=id_sort_key)}
        sets = tuple(frozenset(self.ground.index(v) for v in m) for m in ordered.values())
        if len(frozenset().union(*sets)) != len(self.ground):
            raise InvalidInputError("cover members do not exhaust the ground set")
        object.__setattr__(self, "members", ordered)
        object.__setattr__(self, "dropped", tuple(sorted(dropped, key=id_sort_key)))
        object.__setattr__(self, "index_sets", sets)

    @property
    def ids(self) -> list[str]:
        return list(self.members)

    def to_json(self) -> dict[str, Any]:
        idx = self.ground.index
        return {
            "ground": self.ground.to_json(),
            "members": {
                mid: [thaw_label(v) for v in sorted(m, key=idx)] for mid, m in self.members.items()
            },
        }

    @classmethod
    def from_json(cls, obj: Any) -> "AbstractCover":
        if not isinstance(obj, dict) or "ground" not in obj or "members" not in obj:
            raise InvalidInputError("cover must have 'ground' and 'members'")
        return cls(GroundSet.from_json(obj["ground"]), dict(obj["members"]))


def _same_ground(a: GroundSet, b: GroundSet) -> None:
    if a != b:
        raise InvalidInputError("ground sets differ")


def ball(E: Entourage, x: Any) -> frozenset:
    return E.ball(x)


def compose(E: Entourage, F: Entourage) -> Entourage:
    """``E o F = {(x, z) : (x, y) in E and (y, z) in F for some y}``, symmetrized."""
    _same_ground(E.ground, F.ground)
    balls = []
    for b in E.balls:
        out: set[int] = set()
        for y in b:
            out |= F.balls[y]
        balls.append(out)
    return Entourage.from_index_balls(E.ground, balls)


def product_entourage(parts: Sequence[Entourage]) -> Entourage:
    """Coordinatewise relation on the product ground (the max metric for radii)."""
    if not parts:
        raise InvalidInputError("product needs at least one factor")
    ground = GroundSet.product([p.ground for p in parts])
    sizes = [len(p.ground) for p in parts]
    strides = [1] * len(sizes)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    balls = []
    for combo in itertools.product(*(range(s) for s in sizes)):
        factor_balls = [p.balls[c] for p, c in zip(parts, combo)]
        balls.append(
            [sum(s * v for s, v in zip(strides, pick)) for pick in itertools.product(*factor_balls)]
        )
    return Entourage(ground, balls)


def group_entourage(act: PermutationAction, gens: Sequence[int] | None = None, word_length: int = 1) -> Entourage:
    """``y in {x} u Fx u F^-1 x``; with ``word_length = w``, words of length <= w.

    ``gens`` are generator positions in ``act`` (default: all of them).
    """
    if gens is None:
        gens = range(len(act.generators))
    gens = sorted(set(int(g) for g in gens))
    if any(not 0 <= g < len(act.generators) for g in gens):
        raise InvalidInputError(f"generator positions {gens} out of range")
    if word_length < 0:
        raise InvalidInputError("word_length must be >= 0")
    moves = [act.generators[g] for g in gens] + [act.inverses[g] for g in gens]
    balls = []
    for x in range(len(act.ground)):
        seen = {x}
        frontier = [x]
        for _ in range(word_length):
            nxt = []
            for y in frontier:
                for m in moves:
                    z = m[y]
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        balls.append(seen)
    payload = {"action": act.to_json(), "generators": gens, "word_length": word_length}
    return Entourage(act.ground, balls, "group", payload)


def is_e_chain(E: Entourage, seq: Sequence[Any]) -> bool:
    """Whether consecutive elements of ``seq`` are ``E``-related."""
    idx = [E.ground.index(x) for x in seq]
    return all(b in E.balls[a] for a, b in zip(idx, idx[1:]))


def _reach(E: Entourage, start: int) -> dict[int, int | None]:
    parent: dict[int, int | None] = {start: None}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in sorted(E.balls[i]):
            if j not in parent:
                parent[j] = i
                queue.append(j)
    return parent


def chain_component(E: Entourage, x: Any) -> frozenset:
    """All points reachable from ``x`` by an ``E``-chain."""
    labels = E.ground.labels
    return frozenset(labels[j] for j in _reach(E, E.ground.index(x)))


def e_chain_between(E: Entourage, x: Any, y: Any) -> list | None:
    """A shortest ``E``-chain from ``x`` to ``y``, or ``None`` if none exists."""
    parent = _reach(E, E.ground.index(x))
    j: int | None = E.ground.index(y)
    if j not in parent:
        return None
    path = []
    while j is not None:
        path.append(E.ground.labels[j])
        j = parent[j]
    return path[::-1]


def component_partition(E: Entourage) -> list[frozenset[int]]:
    """Chain components as index sets, ordered by smallest index."""
    seen: set[int] = set()
    parts = []
    for i in range(len(E.ground)):
        if i not in seen:
            comp = frozenset(_reach(E, i))
            seen |= comp
            parts.append(comp)
    return parts


def cover_multiplicity(E: Entourage, cov: AbstractCover) -> tuple[int, Any]:
    """Max over ``x`` of ``|{U : E[x] meets U}|`` and the first ``x`` attaining it."""
    _same_ground(E.ground, cov.ground)
    owners: list[list[int]] = [[] for _ in range(len(E.ground))]
    for pos, members in enumerate(cov.index_sets):
        for i in members:
            owners[i].append(pos)
    best, where = -1, 0
    for i, b in enumerate(E.balls):
        hit = set()
        for j in b:
            hit.update(owners[j])
        if len(hit) > best:
            best, where = len(hit), i
    return best, E.ground.labels[where]


def is_uniformly_bounded(cov: AbstractCover, E: Entourage) -> bool:
    """Whether ``U x U`` lies in ``E`` for every member ``U``."""
    _same_ground(E.ground, cov.ground)
    return all(m <= E.balls[i] for m in cov.index_sets for i in m)


def bounding_entourage(cov: AbstractCover) -> Entourage:
    """Smallest entourage containing ``U x U`` for every member ``U``."""
    balls: list[set[int]] = [set() for _ in range(len(cov.ground))]
    for m in cov.index_sets:
        for i in m:
            balls[i] |= m
    return Entourage(cov.ground, balls)


def finitary_bound(E: Entourage) -> int:
    """``max_x |E[x]|``."""
    return max(len(b) for b in E.balls)


def fixes(perm: Sequence[int], i: int) -> bool:
    return perm[i] == i


def find_free_point(ground: GroundSet, perms: Sequence[Sequence[int]], start: Any | None = None) -> Any | None:
    """A point moved by every permutation in ``perms``, scanning from ``start``.

    Returns ``None`` when each point is fixed by some permutation in the set.
    """
    size = len(ground)
    first = 0 if start is None else ground.index(start)
    for step in range(size):
        i = (first + step) % size
        if not any(fixes(p, i) for p in perms):
            return ground.labels[i]
    return None
