"""Seeded random generation of centrally symmetric rational polygons."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import DegenerateInput, GenerationFailed, PerturbationFailed
from .geometry import ConvexPolygon, Point, convex_hull
from .transversal import perturb_to_F

DENOMINATOR = 64
MAX_RETRIES = 100


def random_symmetric_polygon(rng: random.Random, m: int = 4, rmin: float = 0.5,
                             rmax: float = 1.5) -> ConvexPolygon:
    """Hull of m random points and their negations, coordinates in (1/64)Z."""
    for _ in range(MAX_RETRIES):
        pts = []
        for _ in range(m):
            theta = rng.uniform(0.0, 2 * math.pi)
            rad = rng.uniform(rmin, rmax)
            p = Point(Fraction(round(rad * math.cos(theta) * DENOMINATOR), DENOMINATOR),
                      Fraction(round(rad * math.sin(theta) * DENOMINATOR), DENOMINATOR))
            pts += [p, -p]
        try:
            P = convex_hull(pts, "central")
        except DegenerateInput:
            continue
        if len(P) >= 4:
            return P
    raise GenerationFailed("could not generate a symmetric polygon")


def random_F_pair(rng: random.Random, m: int = 4, require_crossing: bool = True):
    """A random transversal pair of symmetric polygons.

    Draws are retried (up to 100 times) when perturbation fails or, with
    ``require_crossing``, when the boundaries do not cross.
    """
    from .transversal import check_class_F

    for _ in range(MAX_RETRIES):
        K = random_symmetric_polygon(rng, m)
        L = random_symmetric_polygon(rng, m)
        try:
            K, L = perturb_to_F(K, L, Fraction(1, 100))
        except PerturbationFailed:
            continue
        if require_crossing and not check_class_F(K, L).crossings:
            continue
        return K, L
    raise GenerationFailed("no transversal pair after 100 retries")
