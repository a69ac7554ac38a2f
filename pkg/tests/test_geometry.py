"""Exact planar geometry: predicates, hulls, clipping, maps, support and Hausdorff distance."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
import shapely.geometry as sg
from hypothesis import given
from hypothesis import strategies as st

from conftest import polygons, positive_scales, symmetric_polygons
from logconcave2d.errors import DegenerateInput, GeometryError, NonPositiveScale, SingularMatrix
from logconcave2d.geometry import (
    ConvexPolygon, Direction, Point, area, contains, convex_hull, dot, edge_outer_normal,
    hausdorff_distance, intersect, is_centrally_symmetric, linear_map, orientation, rectangle,
    scale, square, support,
)
from logconcave2d.sampling import random_symmetric_polygon
from logconcave2d.serialize import polygon_from_json, polygon_to_json

F = Fraction


def shapely_area(P: ConvexPolygon, R: ConvexPolygon) -> float:
    a = sg.Polygon([(float(v.x), float(v.y)) for v in P.vertices])
    b = sg.Polygon([(float(v.x), float(v.y)) for v in R.vertices])
    return a.intersection(b).area


class TestPredicates:
    def test_orientation_signs(self):
        assert orientation((0, 0), (1, 0), (0, 1)) == 1
        assert orientation((0, 0), (1, 0), (2, 0)) == 0
        assert orientation((0, 0), (0, 1), (1, 0)) == -1

    def test_orientation_is_exact_for_nearly_collinear_points(self):
        eps = F(1, 10**30)
        assert orientation((0, 0), (1, 1), (2, 2 + eps)) == 1
        assert orientation((0, 0), (1, 1), (2, 2 - eps)) == -1


class TestHull:
    def test_square(self):
        P = convex_hull([(1, 1), (-1, 1), (-1, -1), (1, -1)])
        assert P.vertices == square().vertices

    def test_triangle(self):
        P = convex_hull([(-5, -2), (0, 3), (5, -2)])
        assert set(P.vertices) == {Point(F(-5), F(-2)), Point(F(0), F(3)), Point(F(5), F(-2))}

    def test_interior_point_dropped(self):
        P = convex_hull([(1, 1), (-1, 1), (-1, -1), (1, -1), (0, 0)])
        assert len(P) == 4

    def test_collinear_points_rejected(self):
        with pytest.raises(DegenerateInput):
            convex_hull([(0, 0), (1, 1), (2, 2)])

    @given(polygons())
    def test_hull_is_idempotent(self, P):
        assert convex_hull(P.vertices).vertices == P.vertices

    def test_constructor_rejects_non_convex_sequences(self):
        with pytest.raises(DegenerateInput):
            ConvexPolygon((Point(F(0), F(0)), Point(F(2), F(0)), Point(F(1), F(1, 4)), Point(F(1), F(2))))

    def test_constructor_checks_symmetry_flag(self):
        with pytest.raises(DegenerateInput):
            ConvexPolygon(convex_hull([(0, 0), (1, 0), (0, 1)]).vertices, "central")


class TestArea:
    def test_reference_areas(self):
        assert area(square()) == 4
        assert area(rectangle(-6, 6, -3, 1)) == 48
        assert area(convex_hull([(-5, -2), (0, 3), (5, -2)])) == 25

    @given(polygons(), positive_scales)
    def test_scaling_law(self, P, a):
        assert area(scale(P, a)) == a * a * area(P)

    def test_scale_examples(self):
        half = scale(square(), F(1, 2))
        assert half.vertices == square(F(1, 2)).vertices and area(half) == 1
        assert area(scale(square(), 2)) == 16

    def test_nonpositive_scale(self):
        with pytest.raises(NonPositiveScale):
            scale(square(), 0)


class TestIntersect:
    def test_idempotent_and_containment(self):
        Q = square()
        assert intersect(Q, Q).vertices == Q.vertices
        assert intersect(Q, scale(Q, 2)).vertices == Q.vertices

    def test_rectangle_triangle_against_hand_clipping(self):
        # only y <= 1 is active: the triangle loses its tip above y = 1, a
        # triangle of height 2 and base 10 * 2/5 = 4, so 25 - 4 = 21
        K = rectangle(-6, 6, -3, 1)
        L = convex_hull([(-5, -2), (0, 3), (5, -2)])
        assert area(intersect(K, L)) == 21
        assert shapely_area(K, L) == pytest.approx(21, abs=1e-12)

    def test_touching_polygons_give_empty(self):
        A = rectangle(0, 1, 0, 1)
        B = rectangle(1, 2, 0, 1)
        assert intersect(A, B) is None

    @given(polygons(), polygons())
    def test_commutative_monotone_and_contained(self, P, R):
        I1, I2 = intersect(P, R), intersect(R, P)
        if I1 is None:
            assert I2 is None
            return
        assert area(I1) == area(I2)
        assert area(I1) <= min(area(P), area(R))
        assert all(contains(P, v) and contains(R, v) for v in I1.vertices)

    @given(polygons(), polygons())
    def test_matches_shapely(self, P, R):
        I = intersect(P, R)
        ours = float(area(I)) if I is not None else 0.0
        assert ours == pytest.approx(shapely_area(P, R), abs=1e-9)

    def test_symmetric_pairs_give_symmetric_intersections(self):
        rng = random.Random(7)
        for _ in range(1000):
            P, R = random_symmetric_polygon(rng), random_symmetric_polygon(rng)
            I = intersect(P, R)
            assert I is not None  # both contain a neighbourhood of the origin
            assert set(I.vertices) == {-v for v in I.vertices}


class TestLinearMap:
    def test_identity(self):
        P = convex_hull([(0, 0), (3, 1), (1, 2)])
        assert linear_map(P, ((1, 0), (0, 1))).vertices == P.vertices

    def test_diagonal(self):
        P = linear_map(square(), ((2, 0), (0, 3)))
        assert P.vertices == rectangle(-2, 2, -3, 3).vertices
        assert area(P) == 24

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            linear_map(square(), ((1, 2), (2, 4)))

    @given(polygons(), st.tuples(*[st.integers(-5, 5)] * 4))
    def test_determinant_law(self, P, m):
        a, b, c, d = m
        det = a * d - b * c
        if det == 0:
            return
        assert area(linear_map(P, ((a, b), (c, d)))) == abs(det) * area(P)


class TestSupport:
    def test_axis_direction_tie_takes_lowest_index(self):
        value, arg = support(square(), Direction(F(1), F(0)))
        assert value == 1
        # canonical order starts at (-1, -1); (1, -1) precedes (1, 1)
        assert arg == Point(F(1), F(-1))

    def test_diagonal(self):
        assert support(square(), Direction(F(1), F(1)))[0] == 2

    @given(polygons(), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    def test_width_is_positive(self, P, u):
        if u == (0, 0):
            return
        d = Direction(F(u[0]), F(u[1]))
        assert support(P, d)[0] + support(P, Direction(-d.dx, -d.dy))[0] > 0

    @given(polygons(), positive_scales, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    def test_homogeneous_in_scale(self, P, a, u):
        if u == (0, 0):
            return
        d = Direction(F(u[0]), F(u[1]))
        assert support(scale(P, a), d)[0] == a * support(P, d)[0]


class TestNormals:
    def test_square_edges(self):
        Q = square()
        # canonical edges: 0 bottom, 1 right, 2 top, 3 left
        assert edge_outer_normal(Q, 1).same_as(Direction(F(1), F(0)))
        assert edge_outer_normal(Q, 1) == Direction(F(2), F(0))
        assert edge_outer_normal(Q, 2).same_as(Direction(F(0), F(1)))

    @given(polygons())
    def test_normals_are_orthogonal_and_outward(self, P):
        for i, (a, b) in enumerate(P.edges()):
            n = edge_outer_normal(P, i)
            assert dot(n, b - a) == 0
            assert all(dot(n, v - a) <= 0 for v in P.vertices)


class TestHausdorff:
    def test_zero_on_identical(self):
        P = convex_hull([(0, 0), (3, 1), (1, 2)])
        assert hausdorff_distance(P, P).squared == 0

    def test_square_and_double(self):
        h = hausdorff_distance(square(), scale(square(), 2))
        assert h.squared == 2
        assert h.lo ** 2 <= 2 <= h.hi ** 2
        assert math.floor(h.lo * 10**8) == math.floor(h.hi * 10**8) == 141421356
        assert h.hi - h.lo <= F(1, 10**12)
        assert float(h.lo) == pytest.approx(math.sqrt(2), abs=1e-12)

    @given(polygons(), polygons())
    def test_symmetric(self, P, R):
        assert hausdorff_distance(P, R).squared == hausdorff_distance(R, P).squared


class TestSerialization:
    @given(symmetric_polygons())
    def test_round_trip(self, P):
        back = polygon_from_json(polygon_to_json(P))
        assert back.vertices == P.vertices and back.symmetry == P.symmetry
        assert is_centrally_symmetric(back)

    def test_rational_strings(self):
        obj = polygon_to_json(square(F(1, 2)))
        assert obj["vertices"][0] == ["-1/2", "-1/2"]
        assert polygon_to_json(square())["vertices"][0] == ["-1", "-1"]

    @pytest.mark.parametrize("bad", [{}, {"vertices": [["a", "1"]]}, {"vertices": [[1]]}, {"vertices": "xy"}])
    def test_malformed(self, bad):
        with pytest.raises(GeometryError):
            polygon_from_json(bad)
