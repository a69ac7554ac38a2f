"""Closed forms of the edge and corner cases against direct geometry."""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import diamond
from logconcave2d.dynamics import g_derivative, g_value, property_B_check
from logconcave2d.errors import InvariantViolation, NotEdgeCase, OutOfRange
from logconcave2d.geometry import Point, area, convex_hull, intersect, square
from logconcave2d.oracle import (
    CornerCaseParams, E_boundary_curvature_published, E_boundary_slope, E_boundary_value,
    E_polynomial, EdgeCaseParams, corner_case_check, corner_case_family, corner_case_params,
    corner_case_slopes, edge_case_check, edge_case_family, edge_case_params, edge_case_quantities,
    g1_corner, gprime_bound_corner, gprime_corner_from_slopes, edge_case_algebra_identity,
    quadratic_coefficients,
)
from logconcave2d.reduction import classify_square_case
from logconcave2d.transversal import boundary_components

F = Fraction

EDGE_L = convex_hull([(3, 0), (0, F(9, 10)), (-3, 0), (0, F(-9, 10))])
GRID16 = [F(2 * i, 17) for i in range(1, 17)]


def isosceles(v, w):
    """conv{±(-v, v), ±(w, w)}: symmetric about the diagonal y = x."""
    pts = [Point(F(-v), F(v)), Point(F(w), F(w))]
    return convex_hull(pts + [-p for p in pts], "central")


@pytest.fixture(scope="module")
def edge_family():
    return edge_case_family()


@pytest.fixture(scope="module")
def corner_family():
    return corner_case_family()


class TestEdgeCase:
    def test_hand_computed_example(self):
        # the vertex (3, 0) has neighbours (0, ±9/10): slopes ±3/10, crossings (1, ±3/5)
        p = edge_case_params(EDGE_L)
        assert (p.c, p.d, p.cot_alpha, p.cot_beta) == (3, 0, F(3, 10), F(-3, 10))
        assert p.area_L == F(27, 5)
        assert edge_case_quantities(p) == (F(12, 5), F(-6, 5), 3)
        assert g_value(square(), EDGE_L) == F(12, 5)
        assert g_derivative(square(), EDGE_L) == F(-6, 5)
        assert area(intersect(square(), EDGE_L)) == 3

    def test_crossing_ordinates(self, edge_family):
        for L in edge_family:
            p = edge_case_params(L)
            ys = {q.y for c in boundary_components(square(), L) for q in (c.start, c.end) if q.x == 1}
            assert ys == {(p.c - 1) * p.cot_alpha + p.d, (p.c - 1) * p.cot_beta + p.d}

    def test_family_matches_direct_values(self, edge_family):
        assert len(edge_family) >= 20
        Q = square()
        for L in edge_family:
            p = edge_case_params(L)
            assert p.spread > 0 and p.c > 1
            g1, gp, S = edge_case_quantities(p)
            assert g1 == g_value(Q, L) and gp == g_derivative(Q, L)
            assert S == area(intersect(Q, L))
            verdict = edge_case_check(p)
            rep = property_B_check(Q, L)
            assert (verdict.lhs, verdict.rhs, verdict.holds) == (rep.lhs, rep.rhs, rep.holds)
            assert verdict.holds

    def test_rotated_configuration(self):
        # a quarter turn of EDGE_L crosses only the horizontal edges
        L = convex_hull([(-v.y, v.x) for v in EDGE_L.vertices])
        assert edge_case_params(L) == edge_case_params(EDGE_L)

    def test_negation_invariance(self):
        neg = convex_hull([-v for v in EDGE_L.vertices])
        assert edge_case_params(neg) == edge_case_params(EDGE_L)

    def test_short_vertex_gives_trivial_branch(self):
        p = EdgeCaseParams(F(1, 2), F(-1, 2), F(3, 2), F(0), F(3))
        g1, gp, _ = edge_case_quantities(p)
        assert g1 + gp < 0
        v = edge_case_check(p)
        assert v.branch == "trivial_negative" and v.holds

    def test_area_at_the_convexity_cap(self):
        # c = 3, spread 1: triangles (c - 1) g(1) / 2 = 4, cap (c/(c-1))^2 * 4 = 9
        p = EdgeCaseParams(F(1, 2), F(-1, 2), F(3), F(0), F(9))
        v = edge_case_check(p)
        assert v.branch == "main" and v.holds and "within" in v.detail
        assert (v.lhs, v.rhs) == (10, 16)
        c = p.c
        assert c * c / (c - 1) ** 2 == F(9, 4) <= 1 + 2 / (c - 2) == 3

    @given(st.fractions(min_value=F(201, 100), max_value=F(50), max_denominator=1000))
    def test_algebra_identity(self, c):
        left, right = edge_case_algebra_identity(c)
        assert left == right

    def test_invalid_params(self):
        with pytest.raises(InvariantViolation):
            edge_case_check(EdgeCaseParams(F(1), F(-1), F(1), F(0), F(3)))
        with pytest.raises(InvariantViolation):
            edge_case_check(EdgeCaseParams(F(-1), F(1), F(3), F(0), F(3)))

    def test_not_an_edge_case(self):
        with pytest.raises(NotEdgeCase):
            edge_case_params(diamond(F(3, 2)))


class TestCornerCase:
    def test_g1(self):
        assert g1_corner(1, 1) == 4
        eps = F(1, 10**6)
        assert 0 < g1_corner(2 - eps, 2 - eps) == 4 * eps
        with pytest.raises(OutOfRange):
            g1_corner(2, 1)

    def test_bound(self):
        assert gprime_bound_corner(1, 1, F(7, 2)) == -8
        near = gprime_bound_corner(1, 1, 3 + F(1, 10**6))
        assert -F(1, 10**4) < near < 0
        with pytest.raises(OutOfRange):
            gprime_bound_corner(1, 1, 3)

    def test_isosceles_configuration_attains_the_bound(self):
        for v, w in [(F(3, 4), F(3, 2)), (F(1, 2), F(3, 2)), (F(1, 4), F(7, 4)), (F(3, 4), F(2))]:
            L = isosceles(v, w)
            assert classify_square_case(square(), L) == "corner_case"
            p = corner_case_params(L)
            assert p.a == p.b
            assert g_derivative(square(), L) == gprime_bound_corner(p.a, p.b, p.S)

    def test_worked_isosceles_example(self):
        p = corner_case_params(isosceles(F(3, 4), F(3, 2)))
        assert (p.a, p.b, p.S) == (1, 1, F(7, 2))
        assert g_derivative(square(), isosceles(F(3, 4), F(3, 2))) == -8

    def test_family_matches_direct_values(self, corner_family):
        assert len(corner_family) >= 20
        Q = square()
        for L in corner_family:
            p = corner_case_params(L)
            assert 0 < p.a < 2 and 0 < p.b < 2 and 4 - p.a * p.b < p.S < 4
            assert g_value(Q, L) == g1_corner(p.a, p.b)
            gp = g_derivative(Q, L)
            assert gp == gprime_corner_from_slopes(*corner_case_slopes(L))
            assert gp <= gprime_bound_corner(p.a, p.b, p.S)

    def test_oracle_holds_implies_report_holds(self, corner_family):
        for L in corner_family:
            v = corner_case_check(corner_case_params(L))
            assert v.holds
            assert property_B_check(square(), L).holds

    def test_invalid_params(self):
        with pytest.raises(InvariantViolation):
            corner_case_check(CornerCaseParams(F(1), F(1), F(4)))


class TestPolynomialE:
    def test_boundary_point(self):
        assert E_polynomial(1, 1, 3) == 4 == E_boundary_value(1, 1)

    def test_boundary_value_and_slope_identities(self):
        for a in GRID16:
            for b in GRID16:
                S0 = 4 - a * b
                value, slope, _ = quadratic_coefficients(lambda S: E_polynomial(a, b, S), S0)
                assert value == E_boundary_value(a, b) > 0
                assert slope == E_boundary_slope(a, b) > 0

    def test_true_second_derivative(self):
        # E is quadratic in S with constant second derivative 4(8 - a - b)
        a, b, S = sp.symbols("a b S")
        G = 8 - 2 * a - 2 * b
        E = G * (G - S) * ((4 - S) + sp.Rational(1, 2) * (a - b) ** 2) + 8 * S * (S - (4 - a * b))
        assert sp.expand(sp.diff(E, S, 3)) == 0
        assert sp.expand(sp.diff(E, S, 2) - 4 * (8 - a - b)) == 0
        for x in GRID16:
            for y in GRID16:
                _, _, curv = quadratic_coefficients(lambda s: E_polynomial(x, y, s), 4 - x * y)
                assert curv == 4 * (8 - x - y) > 0

    def test_published_curvature_differs(self):
        mismatches = 0
        for a in GRID16:
            for b in GRID16:
                _, _, curv = quadratic_coefficients(lambda S: E_polynomial(a, b, S), 4 - a * b)
                mismatches += curv != E_boundary_curvature_published(a, b)
        assert mismatches == 256

    def test_nonnegative_on_dense_grid(self):
        ks = [F(k, 8) for k in range(1, 16)]
        for a in ks:
            for b in ks:
                lo = 4 - a * b
                for j in range(1, 65):
                    S = lo + a * b * F(j, 65)
                    assert E_polynomial(a, b, S) >= 0
                    assert corner_case_check(CornerCaseParams(a, b, S)).holds
