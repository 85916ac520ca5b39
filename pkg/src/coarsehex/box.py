"""Discrete boxes ``k1 x ... x kn`` under the Chebyshev (max-coordinate) metric.

A cell is a plain tuple of non-negative ints.  Axes are numbered from 1 in
every public signature and in serialized output; coordinates are 0-based.
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Iterator, Sequence

from .errors import InvalidInputError

Cell = tuple[int, ...]

LOW = "low"
HIGH = "high"


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInputError(f"{what} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class BoxShape:
    """The box ``dims[0] x ... x dims[n-1]`` with every ``dims[i] >= 1``."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(_as_int(k, "box side") for k in self.dims)
        if not dims:
            raise InvalidInputError("a box needs at least one axis")
        if any(k < 1 for k in dims):
            raise InvalidInputError(f"box sides must be >= 1, got {dims}")
        if math.prod(dims) > sys.maxsize:
            raise InvalidInputError(f"box {dims} has too many cells")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def cells(self) -> Iterator[Cell]:
        """All cells in row-major lexicographic order."""
        return itertools.product(*(range(k) for k in self.dims))

    def contains(self, cell: Sequence[int]) -> bool:
        return len(cell) == len(self.dims) and all(
            0 <= c < k for c, k in zip(cell, self.dims)
        )

    def check_cell(self, cell: Iterable[int]) -> Cell:
        """Normalize ``cell`` to a tuple and raise if it lies outside the box."""
        c = tuple(_as_int(v, "cell coordinate") for v in cell)
        if not self.contains(c):
            raise InvalidInputError(f"cell {c} is not in box {self.dims}")
        return c

    def check_axis(self, axis: int) -> int:
        axis = _as_int(axis, "axis")
        if not 1 <= axis <= self.n:
            raise InvalidInputError(f"axis {axis} out of range 1..{self.n}")
        return axis

    def to_json(self) -> dict[str, Any]:
        return {"dims": list(self.dims)}

    @classmethod
    def from_json(cls, obj: Any) -> "BoxShape":
        if not isinstance(obj, dict) or "dims" not in obj:
            raise InvalidInputError("box shape must be an object with 'dims'")
        return cls(tuple(obj["dims"]))


@dataclass(frozen=True)
class CellSet:
    """A finite set of cells of one box."""

    shape: BoxShape
    cells: frozenset[Cell]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "cells", frozenset(self.shape.check_cell(c) for c in self.cells)
        )

    @classmethod
    def trusted(cls, shape: BoxShape, cells: Iterable[Cell]) -> "CellSet":
        """Build without re-validating cells already known to be in ``shape``."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "shape", shape)
        object.__setattr__(obj, "cells", frozenset(cells))
        return obj

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(sorted(self.cells))

    def __contains__(self, cell: object) -> bool:
        return cell in self.cells

    def sorted(self) -> list[Cell]:
        return sorted(self.cells)

    def to_json(self) -> dict[str, Any]:
        return {"shape": self.shape.to_json(), "cells": [list(c) for c in self.sorted()]}

    @classmethod
    def from_json(cls, obj: Any) -> "CellSet":
        if not isinstance(obj, dict) or "shape" not in obj or "cells" not in obj:
            raise InvalidInputError("cell set must have 'shape' and 'cells'")
        shape = BoxShape.from_json(obj["shape"])
        cells = [tuple(c) for c in obj["cells"]]
        if len(set(cells)) != len(cells):
            raise InvalidInputError("cell set lists a cell twice")
        return cls(shape, frozenset(cells))


def cheb_dist(a: Sequence[int], b: Sequence[int]) -> int:
    """Chebyshev distance ``max_i |a[i] - b[i]|``."""
    if len(a) != len(b):
        raise InvalidInputError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return max((abs(x - y) for x, y in zip(a, b)), default=0)


@lru_cache(maxsize=None)
def unit_offsets(n: int) -> tuple[Cell, ...]:
    """Nonzero vectors of ``{-1,0,1}^n`` in lexicographic order."""
    zero = (0,) * n
    return tuple(v for v in itertools.product((-1, 0, 1), repeat=n) if v != zero)


def neighbor_cells(c: Cell, dims: Sequence[int]) -> list[Cell]:
    """Cells at Chebyshev distance exactly 1 from ``c``, lexicographic order."""
    out = []
    for off in unit_offsets(len(dims)):
        y = tuple(a + b for a, b in zip(c, off))
        if all(0 <= v < k for v, k in zip(y, dims)):
            out.append(y)
    return out


def unit_neighbors(c: Sequence[int], s: BoxShape) -> CellSet:
    """All cells ``y != c`` of ``s`` with ``cheb_dist(c, y) <= 1``."""
    cell = s.check_cell(c)
    return CellSet.trusted(s, neighbor_cells(cell, s.dims))


def on_face(c: Sequence[int], axis: int, side: str, s: BoxShape) -> bool:
    """Whether ``c`` lies on the low (coordinate 0) or high (``k-1``) face of ``axis``.

    On an axis with ``k == 1`` the two faces coincide.
    """
    axis = s.check_axis(axis)
    cell = s.check_cell(c)
    if side == LOW:
        return cell[axis - 1] == 0
    if side == HIGH:
        return cell[axis - 1] == s.dims[axis - 1] - 1
    raise InvalidInputError(f"side must be 'low' or 'high', got {side!r}")


def set_diameter(A: CellSet | Iterable[Cell]) -> int | None:
    """Largest pairwise Chebyshev distance, or ``None`` for the empty set.

    For the max metric this is the widest per-axis coordinate range.
    """
    cells = list(A.cells if isinstance(A, CellSet) else A)
    if not cells:
        return None
    return max(max(col) - min(col) for col in zip(*cells))


def enumerate_unit_cubes(s: BoxShape) -> Iterator[CellSet]:
    """Anchored unit subcubes, clipped to the box, in anchor order.

    Every subset of diameter <= 1 sits inside at least one of them.
    """
    for cube in _unit_cube_cells(s.dims):
        yield CellSet.trusted(s, cube)


@lru_cache(maxsize=64)
def _unit_cube_cells(dims: tuple[int, ...]) -> tuple[tuple[Cell, ...], ...]:
    cubes = []
    for anchor in itertools.product(*(range(max(k - 1, 1)) for k in dims)):
        ranges = [range(a, min(a + 1, k - 1) + 1) for a, k in zip(anchor, dims)]
        cubes.append(tuple(itertools.product(*ranges)))
    return tuple(cubes)
