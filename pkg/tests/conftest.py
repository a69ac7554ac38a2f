"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, reject, settings
from hypothesis import strategies as st

from logconcave2d.errors import DegenerateInput
from logconcave2d.geometry import ConvexPolygon, Point, convex_hull, square
from logconcave2d.sampling import random_F_pair

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def diamond(r) -> ConvexPolygon:
    r = Fraction(r)
    return convex_hull([(r, 0), (0, r), (-r, 0), (0, -r)], "unconditional")


@pytest.fixture
def Q() -> ConvexPolygon:
    return square()


@pytest.fixture(scope="session")
def random_pairs():
    """40 seeded transversal pairs of symmetric polygons (with crossings)."""
    rng = random.Random(20240607)
    return [random_F_pair(rng) for _ in range(40)]


_coord = st.integers(-48, 48).map(lambda k: Fraction(k, 16))


@st.composite
def symmetric_polygons(draw, max_points: int = 4):
    pts = draw(st.lists(st.tuples(_coord, _coord), min_size=2, max_size=max_points))
    pts = [Point(x, y) for x, y in pts]
    try:
        P = convex_hull(pts + [-p for p in pts], "central")
    except DegenerateInput:
        reject()
    return P


@st.composite
def polygons(draw, max_points: int = 7):
    pts = draw(st.lists(st.tuples(_coord, _coord), min_size=3, max_size=max_points))
    try:
        return convex_hull(pts)
    except DegenerateInput:
        reject()


rationals = st.fractions(min_value=Fraction(-4), max_value=Fraction(4), max_denominator=32)
positive_scales = st.fractions(min_value=Fraction(1, 4), max_value=Fraction(4), max_denominator=32)
