"""Exact planar convex geometry over the rationals.

Every coordinate is a :class:`fractions.Fraction`; predicates never use an
epsilon.  Polygons are immutable, counterclockwise, strictly convex and are
stored starting from their lowest (then leftmost) vertex so that two equal
polygons compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateInput, NonPositiveScale, SingularMatrix

Scalar = Fraction
Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

SYMMETRY_FLAGS = ("none", "central", "unconditional")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(Fraction(x), Fraction(y))

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def __add__(self, other) -> "Point":  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other) -> "Point":
        return Point(self.x - other[0], self.y - other[1])

    def times(self, a) -> "Point":
        return Point(self.x * a, self.y * a)


class Direction(NamedTuple):
    """Unnormalized direction; equality in the projective sense is ``same_as``."""

    dx: Fraction
    dy: Fraction

    def same_as(self, other: "Direction") -> bool:
        """True when ``other`` is a positive multiple of this direction."""
        return cross(self, other) == 0 and dot(self, other) > 0

    def parallel_to(self, other: "Direction") -> bool:
        return cross(self, other) == 0

    def __neg__(self) -> "Direction":
        return Direction(-self.dx, -self.dy)


def dot(u, v) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def orientation(p, q, r) -> int:
    """Sign of (q - p) x (r - p): +1 counterclockwise, 0 collinear, -1 clockwise."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def solve2(a11, a12, a21, a22, b1, b2) -> Point:
    """Solve the 2x2 system by Cramer's rule."""
    det = a11 * a22 - a12 * a21
    if det == 0:
        raise SingularMatrix("parallel lines")
    return Point((b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det)


def _strip_collinear(pts: list[Point]) -> list[Point]:
    """Drop repeated and collinear vertices from a closed convex chain."""
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for i in range(len(out)):
            if orientation(out[i - 1], out[i], out[(i + 1) % len(out)]) == 0:
                del out[i]
                changed = True
                break
    return out


def _canonical_start(vertices: Sequence[Point]) -> tuple[Point, ...]:
    k = min(range(len(vertices)), key=lambda i: (vertices[i].y, vertices[i].x))
    return tuple(vertices[k:]) + tuple(vertices[:k])


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    ``symmetry`` records a verified symmetry: ``"central"`` means K = -K and
    ``"unconditional"`` means invariance under both coordinate reflections.
    """

    vertices: tuple[Point, ...]
    symmetry: str = "none"

    def __post_init__(self):
        verts = tuple(Point(Fraction(v[0]), Fraction(v[1])) for v in self.vertices)
        if len(verts) < 3:
            raise DegenerateInput("a polygon needs at least 3 vertices")
        n = len(verts)
        for i in range(n):
            if orientation(verts[i - 1], verts[i], verts[(i + 1) % n]) <= 0:
                raise DegenerateInput(
                    f"vertex {i} breaks strict counterclockwise convexity")
        if self.symmetry not in SYMMETRY_FLAGS:
            raise ValueError(f"unknown symmetry flag {self.symmetry!r}")
        object.__setattr__(self, "vertices", _canonical_start(verts))
        if self.symmetry == "central" and not is_centrally_symmetric(self):
            raise DegenerateInput("polygon flagged central is not K = -K")
        if self.symmetry == "unconditional" and not is_unconditional(self):
            raise DegenerateInput("polygon flagged unconditional is not reflection invariant")

    @classmethod
    def from_points(cls, points: Iterable, symmetry: str | None = None) -> "ConvexPolygon":
        """Convex hull of ``points``; symmetry is detected when not given."""
        return convex_hull(points, symmetry)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def __neg__(self) -> "ConvexPolygon":
        return ConvexPolygon(tuple(-v for v in self.vertices), self.symmetry)

    def __repr__(self) -> str:
        vs = ", ".join(f"({v.x}, {v.y})" for v in self.vertices)
        return f"ConvexPolygon([{vs}], {self.symmetry!r})"


def is_centrally_symmetric(P: ConvexPolygon) -> bool:
    vs = set(P.vertices)
    return all(-v in vs for v in vs)


def is_unconditional(P: ConvexPolygon) -> bool:
    vs = set(P.vertices)
    return all(Point(v.x, -v.y) in vs and Point(-v.x, v.y) in vs for v in vs)


def detect_symmetry(P: ConvexPolygon) -> str:
    if is_unconditional(P):
        return "unconditional"
    if is_centrally_symmetric(P):
        return "central"
    return "none"


def with_detected_symmetry(P: ConvexPolygon) -> ConvexPolygon:
    return ConvexPolygon(P.vertices, detect_symmetry(P))


def convex_hull(points: Iterable, symmetry: str | None = None) -> ConvexPolygon:
    """Andrew's monotone chain, exact; collinear and duplicate points removed."""
    pts = sorted({Point(Fraction(p[0]), Fraction(p[1])) for p in points})
    if len(pts) < 3:
        raise DegenerateInput("need at least 3 distinct points")

    def half(seq):
        chain: list[Point] = []
        for p in seq:
            while len(chain) >= 2 and orientation(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInput("all points are collinear")
    poly = ConvexPolygon(tuple(hull))
    flag = detect_symmetry(poly) if symmetry is None else symmetry
    return ConvexPolygon(poly.vertices, flag)


def area(P: ConvexPolygon) -> Fraction:
    vs = P.vertices
    twice = sum((cross(vs[i - 1], vs[i]) for i in range(len(vs))), Fraction(0))
    return twice / 2


def contains(P: ConvexPolygon, p, strict: bool = False) -> bool:
    """Point-in-polygon for a convex polygon; boundary counts unless ``strict``."""
    for a, b in P.edges():
        o = orientation(a, b, p)
        if o < 0 or (strict and o == 0):
            return False
    return True


def clip_halfplane(pts: list[Point], normal, offset) -> list[Point]:
    """Keep the part of a convex chain with <normal, x> <= offset."""
    out: list[Point] = []
    n = len(pts)
    for i in range(n):
        cur, nxt = pts[i], pts[(i + 1) % n]
        vc = dot(normal, cur) - offset
        vn = dot(normal, nxt) - offset
        if vc <= 0:
            out.append(cur)
        if (vc < 0 < vn) or (vn < 0 < vc):
            s = vc / (vc - vn)
            out.append(Point(cur.x + s * (nxt.x - cur.x), cur.y + s * (nxt.y - cur.y)))
    return out


def edge_halfplane(a: Point, b: Point) -> tuple[Direction, Fraction]:
    """Outer normal and offset of the supporting halfplane to the left of a->b."""
    nrm = Direction(b.y - a.y, a.x - b.x)
    return nrm, dot(nrm, a)


def polygon_from_chain(pts: list[Point], symmetry: str = "none") -> ConvexPolygon | None:
    cleaned = _strip_collinear(pts)
    if len(cleaned) < 3:
        return None
    twice = sum((cross(cleaned[i - 1], cleaned[i]) for i in range(len(cleaned))), Fraction(0))
    if twice <= 0:
        return None
    return ConvexPolygon(tuple(cleaned), symmetry)


def intersect(P: ConvexPolygon, R: ConvexPolygon) -> ConvexPolygon | None:
    """Exact intersection by clipping P against each edge halfplane of R.

    Returns ``None`` when the intersection has zero area.
    """
    pts = list(P.vertices)
    for a, b in R.edges():
        nrm, off = edge_halfplane(a, b)
        pts = clip_halfplane(pts, nrm, off)
        if not pts:
            return None
    central = P.symmetry != "none" and R.symmetry != "none"
    result = polygon_from_chain(pts)
    if result is None:
        return None
    if central:
        return with_detected_symmetry(result)
    return result


def scale(P: ConvexPolygon, a) -> ConvexPolygon:
    a = Fraction(a)
    if a <= 0:
        raise NonPositiveScale(f"scale factor must be positive, got {a}")
    return ConvexPolygon(tuple(v.times(a) for v in P.vertices), P.symmetry)


def det(T: Matrix) -> Fraction:
    return T[0][0] * T[1][1] - T[0][1] * T[1][0]


def apply(T: Matrix, p) -> Point:
    return Point(T[0][0] * p[0] + T[0][1] * p[1], T[1][0] * p[0] + T[1][1] * p[1])


def inverse(T: Matrix) -> Matrix:
    d = det(T)
    if d == 0:
        raise SingularMatrix("matrix is not invertible")
    return ((T[1][1] / d, -T[0][1] / d), (-T[1][0] / d, T[0][0] / d))


def as_matrix(rows) -> Matrix:
    return ((Fraction(rows[0][0]), Fraction(rows[0][1])),
            (Fraction(rows[1][0]), Fraction(rows[1][1])))


def linear_map(P: ConvexPolygon, T) -> ConvexPolygon:
    T = as_matrix(T)
    d = det(T)
    if d == 0:
        raise SingularMatrix("linear map must be invertible")
    image = [apply(T, v) for v in P.vertices]
    if d < 0:
        image.reverse()
    flag = "central" if P.symmetry != "none" else "none"
    poly = ConvexPolygon(tuple(image), flag)
    return with_detected_symmetry(poly) if flag != "none" else poly


def support(P: ConvexPolygon, u) -> tuple[Fraction, Point]:
    """Support value max <u, v> and the lowest-index vertex attaining it."""
    best_val = None
    best = None
    for v in P.vertices:
        val = dot(u, v)
        if best_val is None or val > best_val:
            best_val, best = val, v
    return best_val, best


def edge_outer_normal(P: ConvexPolygon, edge_index: int) -> Direction:
    a = P.vertices[edge_index % len(P)]
    b = P.vertices[(edge_index + 1) % len(P)]
    return Direction(b.y - a.y, a.x - b.x)


def _sq_dist_point_segment(p, a, b) -> Fraction:
    d = (b[0] - a[0], b[1] - a[1])
    w = (p[0] - a[0], p[1] - a[1])
    dd = dot(d, d)
    s = dot(w, d) / dd
    if s <= 0:
        return dot(w, w)
    if s >= 1:
        e = (p[0] - b[0], p[1] - b[1])
        return dot(e, e)
    c = cross(d, w)
    return c * c / dd


def sq_dist_to_polygon(p, P: ConvexPolygon) -> Fraction:
    if contains(P, p):
        return Fraction(0)
    return min(_sq_dist_point_segment(p, a, b) for a, b in P.edges())


class HausdorffBracket(NamedTuple):
    squared: Fraction
    lo: Fraction
    hi: Fraction


def sqrt_bracket(x: Fraction, digits: int = 13) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(x) <= hi with hi - lo <= 10**-digits."""
    m = 10 ** digits
    scaled = x * m * m
    r = isqrt(scaled.numerator // scaled.denominator)
    lo = Fraction(r, m)
    hi = lo if lo * lo == x else Fraction(r + 1, m)
    return lo, hi


def hausdorff_distance(P: ConvexPolygon, R: ConvexPolygon) -> HausdorffBracket:
    """Hausdorff distance of two convex polygons (attained at vertices)."""
    d1 = max(sq_dist_to_polygon(v, R) for v in P.vertices)
    d2 = max(sq_dist_to_polygon(v, P) for v in R.vertices)
    sq = max(d1, d2)
    lo, hi = sqrt_bracket(sq)
    return HausdorffBracket(sq, lo, hi)


def square(half: Fraction = Fraction(1)) -> ConvexPolygon:
    """The square [-half, half]^2; ``square()`` is the unit square Q."""
    h = Fraction(half)
    return ConvexPolygon((Point(-h, -h), Point(h, -h), Point(h, h), Point(-h, h)),
                         "unconditional")


def rectangle(x0, x1, y0, y1) -> ConvexPolygon:
    pts = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    return convex_hull(pts)
