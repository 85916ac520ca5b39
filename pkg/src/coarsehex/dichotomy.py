"""Crossing-or-witness dichotomy for covers of discrete boxes.

For any cover of an ``n``-dimensional box, some member contains a chain
(Chebyshev steps <= 1) from the low face to the high face of some axis, or
some set of diameter <= 1 meets at least ``n + 1`` members.  ``dichotomy``
returns a certificate for one of the two horns and ``verify_certificate``
rechecks it from scratch.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple, Union

from ._ids import id_sort_key
from .box import (
    BoxShape,
    Cell,
    CellSet,
    cheb_dist,
    enumerate_unit_cubes,
    set_diameter,
    unit_offsets,
)
from .errors import Check, InternalContradiction, InvalidInputError, ResourceLimitError

logger = logging.getLogger(__name__)

DEFAULT_CAP = 4096


@dataclass(frozen=True)
class Cover:
    """An id-indexed family of nonempty cell sets whose union is the whole box.

    Members may overlap.  Empty members are dropped and their ids kept in
    ``dropped``.  Members are stored in natural id order, which is the
    order every search in this module scans them.
    """

    shape: BoxShape
    members: Mapping[str, CellSet]
    dropped: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        kept: dict[str, CellSet] = {}
        dropped = list(self.dropped)
        for raw_id, cells in self.members.items():
            mid = str(raw_id)
            if mid in kept or mid in dropped:
                raise InvalidInputError(f"duplicate member id {mid!r}")
            if not isinstance(cells, CellSet):
                cells = CellSet(self.shape, frozenset(tuple(c) for c in cells))
            elif cells.shape != self.shape:
                raise InvalidInputError(f"member {mid!r} lives on a different box")
            if not cells.cells:
                dropped.append(mid)
                logger.warning("dropping empty cover member %r", mid)
                continue
            kept[mid] = cells
        covered: set[Cell] = set()
        for cells in kept.values():
            covered |= cells.cells
        if len(covered) != self.shape.size:
            raise InvalidInputError(
                f"members cover {len(covered)} of {self.shape.size} cells"
            )
        ordered = {k: kept[k] for k in sorted(kept, key=id_sort_key)}
        object.__setattr__(self, "members", ordered)
        object.__setattr__(self, "dropped", tuple(sorted(dropped, key=id_sort_key)))

    @classmethod
    def from_sets(cls, shape: BoxShape, members: Mapping[Any, Iterable[Iterable[int]]]) -> "Cover":
        return cls(shape, {str(k): [tuple(c) for c in v] for k, v in members.items()})

    @property
    def n(self) -> int:
        return self.shape.n

    @property
    def ids(self) -> list[str]:
        return list(self.members)

    def owners(self) -> dict[Cell, list[int]]:
        """Cell -> positions (in id order) of the members containing it."""
        table: dict[Cell, list[int]] = {}
        for pos, cells in enumerate(self.members.values()):
            for c in cells.cells:
                table.setdefault(c, []).append(pos)
        return table

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": self.shape.to_json(),
            "members": {
                mid: [list(c) for c in cs.sorted()] for mid, cs in self.members.items()
            },
        }

    @classmethod
    def from_json(cls, obj: Any) -> "Cover":
        if not isinstance(obj, dict) or "shape" not in obj or "members" not in obj:
            raise InvalidInputError("cover must have 'shape' and 'members'")
        shape = BoxShape.from_json(obj["shape"])
        if not isinstance(obj["members"], dict):
            raise InvalidInputError("'members' must map ids to cell lists")
        return cls.from_sets(shape, obj["members"])


# -- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """Member ``member_id`` contains ``chain``, running low face to high face of ``axis``."""

    member_id: str
    axis: int
    chain: tuple[Cell, ...]

    kind = "crossing"

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "member_id": self.member_id,
            "axis": self.axis,
            "chain": [list(c) for c in self.chain],
        }


@dataclass(frozen=True)
class Witness:
    """A set of diameter <= 1 meeting every member listed in ``touched_ids``."""

    cells: CellSet
    touched_ids: tuple[str, ...]

    kind = "witness"

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "cells": self.cells.to_json(),
            "touched_ids": list(self.touched_ids),
        }


Certificate = Union[Crossing, Witness]


def certificate_from_json(obj: Any) -> Certificate:
    if not isinstance(obj, dict):
        raise InvalidInputError("certificate must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == Crossing.kind:
            return Crossing(
                str(obj["member_id"]),
                int(obj["axis"]),
                tuple(tuple(int(v) for v in c) for c in obj["chain"]),
            )
        if kind == Witness.kind:
            return Witness(
                CellSet.from_json(obj["cells"]),
                tuple(str(t) for t in obj["touched_ids"]),
            )
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed {kind} certificate: {exc}") from exc
    raise InvalidInputError(f"unknown certificate kind {kind!r}")


# -- chain connectivity -----------------------------------------------------


def _components(cells: frozenset[Cell], n: int) -> list[list[Cell]]:
    offsets = unit_offsets(n)
    remaining = set(cells)
    parts = []
    for start in sorted(cells):
        if start not in remaining:
            continue
        remaining.discard(start)
        part = [start]
        queue = deque(part)
        while queue:
            c = queue.popleft()
            for off in offsets:
                y = tuple(a + b for a, b in zip(c, off))
                if y in remaining:
                    remaining.discard(y)
                    part.append(y)
                    queue.append(y)
        parts.append(part)
    return parts


def chain_components(A: CellSet) -> list[CellSet]:
    """Partition ``A`` into chain-connected parts, ordered by smallest cell.

    Distinct parts are at Chebyshev distance >= 2.
    """
    return [CellSet.trusted(A.shape, p) for p in _components(A.cells, A.shape.n)]


class FaceCrossing(NamedTuple):
    axis: int
    chain: tuple[Cell, ...]


def connects_opposite_faces(A: CellSet) -> FaceCrossing | None:
    """Smallest axis whose opposite faces ``A`` joins, with a shortest chain.

    The chain comes from a breadth-first search started at the low-face cells
    in lexicographic order; within a layer cells are expanded in
    lexicographic order and the lexicographically smallest high-face cell of
    the first layer reaching the high face ends the chain.
    """
    shape = A.shape
    comps = _components(A.cells, shape.n)
    for axis in range(1, shape.n + 1):
        i, top = axis - 1, shape.dims[axis - 1] - 1
        sources = []
        for part in comps:
            if any(c[i] == top for c in part):
                sources.extend(c for c in part if c[i] == 0)
        if sources:
            return FaceCrossing(axis, _shortest_chain(A.cells, sorted(sources), i, top))
    return None


def _shortest_chain(cells: frozenset[Cell], sources: list[Cell], i: int, top: int) -> tuple[Cell, ...]:
    offsets = unit_offsets(len(sources[0]))
    parent: dict[Cell, Cell | None] = {s: None for s in sources}
    layer = sources
    while layer:
        hits = [c for c in layer if c[i] == top]
        if hits:
            end: Cell | None = min(hits)
            chain = []
            while end is not None:
                chain.append(end)
                end = parent[end]
            return tuple(reversed(chain))
        nxt = []
        for c in layer:
            for off in offsets:
                y = tuple(a + b for a, b in zip(c, off))
                if y in cells and y not in parent:
                    parent[y] = c
                    nxt.append(y)
        layer = sorted(nxt)
    raise InternalContradiction("crossing component lost its high-face cell")


# -- multiplicity and the dichotomy ----------------------------------------


class UnitMultiplicity(NamedTuple):
    count: int
    cube: CellSet
    touched_ids: tuple[str, ...]


def unit_multiplicity(cov: Cover) -> UnitMultiplicity:
    """Most members met by one anchored unit cube; first maximizing cube wins."""
    ids = cov.ids
    owners = cov.owners()
    best: tuple[int, CellSet, set[int]] | None = None
    for cube in enumerate_unit_cubes(cov.shape):
        touched: set[int] = set()
        for c in cube.cells:
            touched.update(owners[c])
        if best is None or len(touched) > best[0]:
            best = (len(touched), cube, touched)
    assert best is not None
    count, cube, touched = best
    return UnitMultiplicity(count, cube, tuple(ids[p] for p in sorted(touched)))


def _prune_witness(cov: Cover, cube: CellSet, touched_ids: tuple[str, ...]) -> CellSet:
    # single reverse-lex pass; a cell kept once stays necessary, so the result is minimal
    members = [cov.members[t].cells for t in touched_ids]
    keep = set(cube.cells)
    for c in sorted(cube.cells, reverse=True):
        trial = keep - {c}
        if all(m & trial for m in members):
            keep = trial
    return CellSet.trusted(cov.shape, keep)


def dichotomy(cov: Cover) -> Certificate:
    """Certificate for one horn of the dichotomy; crossings are preferred.

    Members are scanned in id order for a crossing.  Failing that, the best
    unit cube must meet at least ``n + 1`` members; it is pruned to a
    minimal subset still meeting all of them.
    """
    for mid, cells in cov.members.items():
        hit = connects_opposite_faces(cells)
        if hit is not None:
            return Crossing(mid, hit.axis, hit.chain)
    count, cube, touched = unit_multiplicity(cov)
    if count < cov.n + 1:
        raise InternalContradiction(
            f"no member crosses and unit multiplicity is only {count} <= n={cov.n}"
        )
    return Witness(_prune_witness(cov, cube, touched), touched)


def hex_corollary_check(cov: Cover) -> Crossing:
    """Crossing for a cover with at most ``n`` members (Gale's Hex theorem)."""
    if len(cov.members) > cov.n:
        raise InvalidInputError(
            f"cover has {len(cov.members)} members, corollary needs <= {cov.n}"
        )
    for mid, cells in cov.members.items():
        hit = connects_opposite_faces(cells)
        if hit is not None:
            return Crossing(mid, hit.axis, hit.chain)
    raise InternalContradiction("cover with <= n members has no crossing member")


def verify_certificate(cov: Cover, cert: Certificate) -> Check:
    """Recheck a certificate against ``cov`` without trusting the solver."""
    shape = cov.shape
    if isinstance(cert, Crossing):
        member = cov.members.get(cert.member_id)
        if member is None:
            return Check.failed("unknown member", member_id=cert.member_id)
        if not isinstance(cert.axis, int) or not 1 <= cert.axis <= shape.n:
            return Check.failed("axis", axis=cert.axis)
        if not cert.chain:
            return Check.failed("empty chain")
        for pos, c in enumerate(cert.chain):
            if not shape.contains(c) or tuple(c) not in member.cells:
                return Check.failed("membership", index=pos, cell=list(c))
        for pos in range(1, len(cert.chain)):
            if cheb_dist(cert.chain[pos - 1], cert.chain[pos]) > 1:
                return Check.failed("step", index=pos)
        i = cert.axis - 1
        if cert.chain[0][i] != 0:
            return Check.failed("low face", cell=list(cert.chain[0]))
        if cert.chain[-1][i] != shape.dims[i] - 1:
            return Check.failed("high face", cell=list(cert.chain[-1]))
        return Check.passed(kind="crossing", length=len(cert.chain))
    if isinstance(cert, Witness):
        if cert.cells.shape != shape:
            return Check.failed("shape")
        diam = set_diameter(cert.cells)
        if diam is None:
            return Check.failed("empty witness")
        if diam > 1:
            return Check.failed("diameter", diameter=diam)
        touched = set(cert.touched_ids)
        if len(touched) != len(cert.touched_ids):
            return Check.failed("duplicate touched id")
        for mid in cert.touched_ids:
            member = cov.members.get(mid)
            if member is None:
                return Check.failed("unknown member", member_id=mid)
            if not member.cells & cert.cells.cells:
                return Check.failed("touched member misses cells", member_id=mid)
        if len(touched) < shape.n + 1:
            return Check.failed("touched count", touched=len(touched), needed=shape.n + 1)
        return Check.passed(kind="witness", touched=len(touched))
    return Check.failed("unknown certificate kind")


# -- independent oracle ------------------------------------------------------


@dataclass(frozen=True)
class BruteForceReport:
    crossing_ids: tuple[str, ...]
    max_multiplicity: int
    crossing_axes: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "crossing_ids": list(self.crossing_ids),
            "crossing_axes": {k: list(v) for k, v in self.crossing_axes.items()},
            "max_multiplicity": self.max_multiplicity,
        }


def brute_force_report(cov: Cover, cap: int = DEFAULT_CAP) -> BruteForceReport:
    """Every crossing member and the exact unit-scale multiplicity, by direct scans.

    Shares no search code with ``dichotomy``: components come from pairwise
    distance flooding and the multiplicity from a unit cube anchored at every
    cell of the box.
    """
    shape = cov.shape
    if shape.size > cap:
        raise ResourceLimitError(f"box has {shape.size} cells, cap is {cap}")
    axes: dict[str, tuple[int, ...]] = {}
    for mid, member in cov.members.items():
        pts = list(member.cells)
        label = list(range(len(pts)))
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if cheb_dist(pts[a], pts[b]) <= 1 and label[a] != label[b]:
                    old, new = label[b], label[a]
                    label = [new if x == old else x for x in label]
        crossed = set()
        for comp in set(label):
            group = [p for p, lab in zip(pts, label) if lab == comp]
            for i, k in enumerate(shape.dims):
                coords = {p[i] for p in group}
                if 0 in coords and k - 1 in coords:
                    crossed.add(i + 1)
        if crossed:
            axes[mid] = tuple(sorted(crossed))
    best = 0
    sets = [m.cells for m in cov.members.values()]
    for anchor in shape.cells():
        cube = list(
            itertools.product(*(range(a, min(a + 2, k)) for a, k in zip(anchor, shape.dims)))
        )
        hits = sum(1 for s in sets if any(c in s for c in cube))
        best = max(best, hits)
    return BruteForceReport(tuple(axes), best, axes)

