import itertools
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsehex.box import (
    BoxShape,
    CellSet,
    cheb_dist,
    enumerate_unit_cubes,
    on_face,
    set_diameter,
    unit_neighbors,
)
from coarsehex.errors import InvalidInputError

from oracles import all_cells, pairwise_diameter


def test_shape_validation():
    assert BoxShape((3, 1, 2)).n == 3
    assert BoxShape((3, 1, 2)).size == 6
    for bad in [(), (0,), (2, -1), (True,), (2.5,)]:
        with pytest.raises(InvalidInputError):
            BoxShape(bad)
    with pytest.raises(InvalidInputError):
        BoxShape((sys.maxsize, 3))


def test_cells_row_major():
    assert list(BoxShape((2, 2)).cells()) == [(0, 0), (0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize(
    "a, b, expected",
    [((0, 0), (1, 1), 1), ((0, 3), (2, 0), 3), ((4, 2, 7), (4, 2, 7), 0)],
)
def test_cheb_dist_examples(a, b, expected):
    assert cheb_dist(a, b) == expected


def test_cheb_dist_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        cheb_dist((0,), (0, 1))


@pytest.mark.parametrize("dims", [(5,), (3, 4), (2, 3, 4), (2, 2, 2, 2)])
def test_cheb_dist_is_a_metric_exhaustively(dims):
    cells = all_cells(dims)
    for a in cells:
        assert cheb_dist(a, a) == 0
        for b in cells:
            d = cheb_dist(a, b)
            assert d == cheb_dist(b, a)
            assert (d == 0) == (a == b)
    for a, b, c in itertools.product(cells[:12], repeat=3):
        assert cheb_dist(a, c) <= cheb_dist(a, b) + cheb_dist(b, c)


@given(st.lists(st.tuples(*[st.integers(-50, 50)] * 3), min_size=3, max_size=3))
def test_triangle_inequality_random(pts):
    a, b, c = pts
    assert cheb_dist(a, c) <= cheb_dist(a, b) + cheb_dist(b, c)


def test_unit_neighbors_examples():
    assert unit_neighbors((0,), BoxShape((3,))).cells == {(1,)}
    inner = unit_neighbors((1, 1), BoxShape((3, 3)))
    assert len(inner) == 8 and (1, 1) not in inner
    assert unit_neighbors((0, 0), BoxShape((1, 1))).cells == frozenset()
    with pytest.raises(InvalidInputError):
        unit_neighbors((3, 0), BoxShape((3, 3)))


@pytest.mark.parametrize("dims", [(4,), (3, 3), (2, 3, 4), (3, 3, 3, 2)])
def test_unit_neighbors_match_definition(dims):
    s = BoxShape(dims)
    cells = all_cells(dims)
    for c in cells:
        expected = {y for y in cells if y != c and max(abs(p - q) for p, q in zip(c, y)) <= 1}
        got = unit_neighbors(c, s).cells
        assert got == expected
        assert len(got) <= 3 ** len(dims) - 1


def test_on_face():
    s = BoxShape((3, 3))
    assert on_face((0, 2), 1, "low", s)
    assert on_face((1, 2), 2, "high", s)
    assert not on_face((1, 2), 1, "high", s)
    one = BoxShape((1,))
    assert on_face((0,), 1, "high", one) and on_face((0,), 1, "low", one)
    with pytest.raises(InvalidInputError):
        on_face((0, 0), 3, "low", s)
    with pytest.raises(InvalidInputError):
        on_face((0, 0), 1, "middle", s)


def test_set_diameter_examples():
    s2, s1 = BoxShape((3, 3)), BoxShape((3,))
    assert set_diameter(CellSet(s2, frozenset({(0, 0), (1, 1)}))) == 1
    assert set_diameter(CellSet(s1, frozenset({(0,), (2,)}))) == 2
    assert set_diameter(CellSet(s1, frozenset({(1,)}))) == 0
    assert set_diameter(CellSet(s1, frozenset())) is None


@settings(max_examples=200)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)), max_size=12))
def test_set_diameter_matches_pairwise(cells):
    assert set_diameter(CellSet(BoxShape((6, 6, 6)), frozenset(cells))) == pairwise_diameter(cells)


def test_unit_cube_examples():
    assert [c.cells for c in enumerate_unit_cubes(BoxShape((2,)))] == [{(0,), (1,)}]
    cubes = list(enumerate_unit_cubes(BoxShape((3, 3))))
    assert len(cubes) == 4 and all(len(c) == 4 for c in cubes)
    assert [min(c.cells) for c in cubes] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [c.cells for c in enumerate_unit_cubes(BoxShape((1, 1)))] == [{(0, 0)}]


@pytest.mark.parametrize("dims", [(1,), (3,), (1, 3), (3, 3), (2, 3, 2), (1, 2, 3)])
def test_every_small_set_lies_in_a_unit_cube(dims):
    s = BoxShape(dims)
    cubes = [c.cells for c in enumerate_unit_cubes(s)]
    assert all(set_diameter(c) <= 1 for c in cubes)
    cells = all_cells(dims)
    for r in range(1, min(len(cells), 5) + 1):
        for sub in itertools.combinations(cells, r):
            if pairwise_diameter(sub) <= 1:
                assert any(set(sub) <= c for c in cubes), sub


def test_cellset_json_roundtrip():
    cs = CellSet(BoxShape((3, 2)), frozenset({(2, 1), (0, 0)}))
    obj = cs.to_json()
    assert obj == {"shape": {"dims": [3, 2]}, "cells": [[0, 0], [2, 1]]}
    assert CellSet.from_json(obj) == cs
    with pytest.raises(InvalidInputError):
        CellSet(BoxShape((2,)), frozenset({(2,)}))
