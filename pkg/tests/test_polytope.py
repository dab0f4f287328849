from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alcove.coverage import ALCOVE_C2, E_POINTS, from_free, to_free
from alcove.polytope import (
    HPolytope, PolytopeError, PolytopeUnion, UnboundedError, brute_force_vertices, canonical_form,
    contains, dimension, enumerate_vertices, fix_coordinates, fm_eliminate, from_lrs_h,
    intersect, is_empty, minimize, polytope_from_json, polytope_to_json, project,
    reduce_redundant, to_lrs_h, union_volume, volume,
)


def box(lo, hi, dim=3, shift=0):
    rows = []
    for j in range(dim):
        r = [F(-lo - (shift if j == 0 else 0))] + [0] * dim
        r[j + 1] = 1
        rows.append(r)
        r = [F(hi + (shift if j == 0 else 0))] + [0] * dim
        r[j + 1] = -1
        rows.append(r)
    return HPolytope.from_rows(dim, rows)


CUBE = box(0, 1)


def simplex(dim=3):
    rows = []
    for j in range(dim):
        r = [0] * (dim + 1)
        r[j + 1] = 1
        rows.append(r)
    rows.append([1] + [-1] * dim)
    return HPolytope.from_rows(dim, rows)


class TestIntersect:
    def test_self(self):
        assert canonical_form(intersect(CUBE, CUBE)) == canonical_form(CUBE)

    def test_facet(self):
        facet = intersect(CUBE, HPolytope.from_rows(3, [[-1, 1, 0, 0]]))
        assert dimension(facet) == 2

    def test_empty(self):
        assert is_empty(intersect(CUBE, HPolytope.from_rows(3, [[-2, 1, 0, 0]])))


class TestFixCoordinates:
    def test_point(self):
        p = fix_coordinates(CUBE, {0: F(1, 2), 1: F(1, 3), 2: 0})
        assert p.dim == 0 and not is_empty(p)

    def test_infeasible(self):
        assert is_empty(fix_coordinates(CUBE, {0: 2}))


class TestProjection:
    def test_square(self):
        p = project(box(0, 1, dim=2), [0])
        assert set(enumerate_vertices(p).vertices) == {(0,), (1,)}

    def test_triangle(self):
        p = project(simplex(2), [0])
        assert set(enumerate_vertices(p).vertices) == {(0,), (1,)}

    @pytest.mark.parametrize("method", ["lp", "vertices"])
    def test_methods_agree(self, method):
        rng = np.random.default_rng(4)
        for _ in range(10):
            rows = [[F(int(rng.integers(1, 5)))] + [F(int(v)) for v in rng.integers(-3, 4, 3)]
                    for _ in range(6)]
            p = intersect(box(-2, 2), HPolytope.from_rows(3, rows))
            a, b = fm_eliminate(p, [1], "lp"), fm_eliminate(p, [1], method)
            assert canonical_form(a) == canonical_form(b)


def test_redundancy():
    p = HPolytope.from_rows(1, [[0, 1], [1, 1], [1, -1]])
    assert set(reduce_redundant(p).inequalities) == {(0, 1), (1, -1)}


class TestVertices:
    def test_cube(self):
        assert len(enumerate_vertices(CUBE)) == 8

    def test_alcove(self):
        verts = {tuple(from_free(v)) for v in enumerate_vertices(ALCOVE_C2).vertices}
        assert verts == {tuple(v) for v in E_POINTS.values()}

    def test_against_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            rows = [[F(int(rng.integers(1, 4)))] + [F(int(v)) for v in rng.integers(-2, 3, 3)]
                    for _ in range(int(rng.integers(1, 6)))]
            p = intersect(box(-1, 1), HPolytope.from_rows(3, rows))
            assert set(enumerate_vertices(p).vertices) == set(brute_force_vertices(p).vertices)


class TestVolume:
    def test_cube(self):
        assert volume(CUBE) == 1

    def test_simplex(self):
        assert volume(simplex()) == F(1, 6)

    def test_flat(self):
        assert volume(intersect(CUBE, HPolytope.from_rows(3, [], [[0, 0, 0, 1]]))) == 0

    def test_union(self):
        assert union_volume([CUBE, box(0, 1, shift=2)]) == 2
        assert union_volume([CUBE, CUBE]) == 1
        assert union_volume([CUBE, box(0, 1, shift=F(1, 2))]) == F(3, 2)


class TestContains:
    def test_closed(self):
        assert contains(CUBE, (F(1, 2),) * 3)
        assert contains(CUBE, (1, 0, F(1, 2)))
        assert not contains(CUBE, (F(3, 2), 0, 0))

    def test_union(self):
        u = PolytopeUnion.of([CUBE, box(0, 1, shift=2)])
        assert u.contains((F(5, 2), 0, 0)) and not u.contains((F(3, 2), 0, 0))


def test_minimize():
    assert minimize(CUBE, [1, 1, 1]) == 0
    assert minimize(CUBE, [-1, 0, 0]) == -1


def test_serialization_round_trip():
    assert polytope_from_json(polytope_to_json(CUBE)) == CUBE
    assert canonical_form(from_lrs_h(to_lrs_h(CUBE))) == canonical_form(CUBE)


def test_unbounded_raises():
    half = HPolytope.from_rows(2, [[0, 1, 0]])
    with pytest.raises(UnboundedError):
        volume(half)


def test_dimension_mismatch():
    with pytest.raises(PolytopeError):
        HPolytope(2, ((0, 1),))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 4), st.integers(-3, 3), st.integers(-3, 3)),
                min_size=1, max_size=5))
def test_fm_soundness(rows):
    """The projection of a polytope contains the shadow of every vertex and
    each of its own vertices is such a shadow."""
    p = intersect(box(-2, 2, dim=2), HPolytope.from_rows(2, [list(map(F, r)) for r in rows]))
    proj = fm_eliminate(p, [1])
    shadow = {(v[0],) for v in enumerate_vertices(p).vertices}
    assert all(contains(proj, s) for s in shadow)
    assert set(enumerate_vertices(proj).vertices) <= shadow
    if shadow:
        assert not is_empty(proj)
    else:
        assert is_empty(proj)


def test_free_coordinates():
    for v in E_POINTS.values():
        assert from_free(to_free(v)) == v
