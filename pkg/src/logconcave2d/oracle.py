"""Closed-form property-B checks for the two terminal square/parallelogram cases.

Edge case: L meets dQ only inside the two vertical edges.  With (c, d) the
vertex of L beyond x = 1 and k_up, k_low the ordinate increments per unit
step left along its two edges (the cotangents of the edge normal angles),
the crossings sit at (1, d + (c - 1) k) and

    g(1) = 2 (c - 1) D,  g'(1) = -2 D,  |Q ∩ L| = |L| - (c - 1)^2 D,

with D = k_up - k_low > 0.

Corner case: L contains two corners of Q and two vertices of L lie in Q.
a, b are the legs cut from each of the other two corners, S = |Q ∩ L|.
Then g(1) = 8 - 2a - 2b and g'(1) is bounded above by
-8 (S - (4 - ab)) / ((4 - S) + (a - b)^2 / 2); property B follows from E >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegenerateInput, InvariantViolation, NotEdgeCase, OutOfRange, UnclassifiedConfiguration,
)
from .geometry import (
    ConvexPolygon, Point, area, contains, convex_hull, edge_outer_normal, intersect, square,
)
from .reduction import classify_square_case
from .transversal import boundary_components, in_class_F

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class EdgeCaseParams:
    cot_alpha: Fraction
    cot_beta: Fraction
    c: Fraction
    d: Fraction
    area_L: Fraction

    @property
    def spread(self) -> Fraction:
        """cot(alpha) - cot(beta)."""
        return self.cot_alpha - self.cot_beta


@dataclass(frozen=True)
class CornerCaseParams:
    a: Fraction
    b: Fraction
    S: Fraction


@dataclass(frozen=True)
class OracleVerdict:
    holds: bool
    lhs: Fraction
    rhs: Fraction
    branch: str
    detail: str = ""

    def to_json(self) -> dict:
        from .serialize import scalar_json
        return {"holds": self.holds, "lhs": scalar_json(self.lhs), "rhs": scalar_json(self.rhs),
                "branch": self.branch, "detail": self.detail}


def _rot90(P: ConvexPolygon) -> ConvexPolygon:
    """Counterclockwise quarter turn (x, y) -> (-y, x)."""
    return ConvexPolygon(tuple(Point(-v.y, v.x) for v in P.vertices), P.symmetry)


def _edge_case_frame(L: ConvexPolygon) -> ConvexPolygon:
    """Rotate L so that dQ ∩ L lies in the vertical edges of Q."""
    Q = square()
    comps = boundary_components(Q, L)
    edges = {e for c in comps for e in c.k_edges}
    # Q's edges in canonical order: 0 bottom, 1 right, 2 top, 3 left
    if edges <= {1, 3}:
        return L
    if edges <= {0, 2}:
        return _rot90(L)
    raise NotEdgeCase("dQ ∩ L is not contained in two opposite edges of Q")


def edge_case_params(L: ConvexPolygon) -> EdgeCaseParams:
    """Read c, d and the two cotangents off L as exact slope ratios."""
    Lr = _edge_case_frame(L)
    vs = Lr.vertices
    right = [k for k, v in enumerate(vs) if v.x > 1]
    if len(right) != 1:
        raise NotEdgeCase("expected exactly one vertex of L beyond x = 1")
    k = right[0]
    c, d = vs[k].x, vs[k].y
    nxt, prv = vs[(k + 1) % len(vs)], vs[k - 1]
    if nxt.x >= 1 or prv.x >= 1:
        raise NotEdgeCase("neighbours of the outer vertex must lie left of x = 1")
    cot_alpha = (nxt.y - d) / (c - nxt.x)
    cot_beta = (prv.y - d) / (c - prv.x)
    return EdgeCaseParams(cot_alpha, cot_beta, c, d, area(L))


def edge_case_quantities(p: EdgeCaseParams) -> tuple[Fraction, Fraction, Fraction]:
    """(g(1), g'(1), |Q ∩ L|) from the closed forms."""
    D = p.spread
    return 2 * (p.c - 1) * D, -2 * D, p.area_L - (p.c - 1) ** 2 * D


def edge_case_check(p: EdgeCaseParams) -> OracleVerdict:
    D = p.spread
    if p.c <= 1 or D <= 0:
        raise InvariantViolation("need c > 1 and cot(alpha) > cot(beta)")
    g1, gp, S = edge_case_quantities(p)
    if S <= 0:
        raise InvariantViolation("|Q ∩ L| would be non-positive")
    lhs, rhs = S * (g1 + gp), g1 * g1
    triangles = HALF * (p.c - 1) * g1
    convexity_cap = p.c ** 2 / (p.c - 1) ** 2 * triangles
    detail = (f"|L| = {p.area_L} vs convexity cap {convexity_cap}: "
              f"{'within' if p.area_L <= convexity_cap else 'EXCEEDS'}")
    if p.c <= 2:
        return OracleVerdict(lhs <= rhs, lhs, rhs, "trivial_negative", detail)
    return OracleVerdict(lhs <= rhs, lhs, rhs, "main", detail)


def edge_case_algebra_identity(c) -> tuple[Fraction, Fraction]:
    """Both sides of c^2/(c-1)^2 = 1 + 2/(c-2) * (1 - (c/2)/(c-1)^2)."""
    c = Fraction(c)
    left = c * c / (c - 1) ** 2
    right = 1 + Fraction(2) / (c - 2) * (1 - (c / 2) / (c - 1) ** 2)
    return left, right


def _check_ab(a, b):
    if not (0 < a < 2 and 0 < b < 2):
        raise OutOfRange(f"need 0 < a, b < 2, got a={a}, b={b}")


def g1_corner(a, b) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    _check_ab(a, b)
    return 8 - 2 * a - 2 * b


def gprime_bound_corner(a, b, S) -> Fraction:
    a, b, S = Fraction(a), Fraction(b), Fraction(S)
    _check_ab(a, b)
    if not 4 - a * b < S < 4:
        raise OutOfRange(f"need 4 - ab < S < 4, got S={S}")
    return -8 * (S - (4 - a * b)) / ((4 - S) + HALF * (a - b) ** 2)


def E_polynomial(a, b, S) -> Fraction:
    a, b, S = Fraction(a), Fraction(b), Fraction(S)
    G = 8 - 2 * a - 2 * b
    return G * (G - S) * ((4 - S) + HALF * (a - b) ** 2) + 8 * S * (S - (4 - a * b))


def E_boundary_value(a, b) -> Fraction:
    """Published closed form of E at S = 4 - ab."""
    a, b = Fraction(a), Fraction(b)
    return (8 - 2 * a - 2 * b) * (2 - a) * (2 - b) * HALF * (a * a + b * b)


def E_boundary_slope(a, b) -> Fraction:
    """Published closed form of dE/dS at S = 4 - ab."""
    a, b = Fraction(a), Fraction(b)
    return (a + b) * ((5 - a - b) ** 2 - 1) + 2 * (a - b) ** 2


def E_boundary_curvature_published(a, b) -> Fraction:
    """Published closed form of d2E/dS2 at S = 4 - ab."""
    a, b = Fraction(a), Fraction(b)
    return 18 * (4 - a * b)


def quadratic_coefficients(f, x0) -> tuple[Fraction, Fraction, Fraction]:
    """Value, first and second derivative at x0 of a quadratic f, from 3 exact samples."""
    x0 = Fraction(x0)
    fm, f0, fp = f(x0 - 1), f(x0), f(x0 + 1)
    return f0, (fp - fm) / 2, fp - 2 * f0 + fm


def corner_case_check(p: CornerCaseParams) -> OracleVerdict:
    """holds iff E(a, b, S) >= 0, which gives property B via the g'(1) bound."""
    a, b, S = p.a, p.b, p.S
    try:
        g1 = g1_corner(a, b)
        bound = gprime_bound_corner(a, b, S)
    except OutOfRange as exc:
        raise InvariantViolation(str(exc)) from exc
    E = E_polynomial(a, b, S)
    lhs, rhs = S * (g1 + bound), g1 * g1
    if (E >= 0) != (lhs <= rhs):
        raise InvariantViolation("E sign disagrees with the bounded inequality")
    return OracleVerdict(E >= 0, lhs, rhs, "main", f"E = {E}")


def corner_case_params(L: ConvexPolygon) -> CornerCaseParams:
    """Legs a (horizontal) and b (vertical) cut from a corner of Q outside L."""
    Q = square()
    outside = [v for v in Q.vertices if not contains(L, v)]
    if len(outside) != 2:
        raise InvariantViolation("corner case needs exactly two corners of Q outside L")
    corner = max(outside, key=lambda v: (v.x, -v.y))
    a = b = None
    for comp in boundary_components(Q, L):
        for p in (comp.start, comp.end):
            if p.y == corner.y and abs(p.x - corner.x) <= 2:
                cand = abs(p.x - corner.x)
                a = cand if a is None else min(a, cand)
            if p.x == corner.x:
                cand = abs(p.y - corner.y)
                b = cand if b is None else min(b, cand)
    inter = intersect(Q, L)
    return CornerCaseParams(a, b, area(inter))


def _reflect_y(P: ConvexPolygon) -> ConvexPolygon:
    return ConvexPolygon(tuple(Point(v.x, -v.y) for v in reversed(P.vertices)), P.symmetry)


def corner_case_slopes(L: ConvexPolygon) -> tuple[Fraction, Fraction]:
    """(tan alpha, cot beta) as exact normal-component ratios.

    The pair is reflected if needed so that the corners of Q cut off by L are
    (1, -1) and (-1, 1); alpha < beta are then the outer normal angles, both in
    (pi/2, pi), of the two edges of L meeting at its vertex near (-1, 1).
    """
    Q = square()
    if contains(L, Point(Fraction(-1), Fraction(1))):
        L = _reflect_y(L)
    vs = L.vertices
    inside = [k for k, v in enumerate(vs) if contains(Q, v, strict=True)]
    if len(inside) != 2:
        raise InvariantViolation("corner case needs exactly two vertices of L inside Q")
    k = max(inside, key=lambda j: vs[j].y - vs[j].x)
    first, second = edge_outer_normal(L, k - 1), edge_outer_normal(L, k)
    # counterclockwise order at the vertex: the incoming edge has the smaller normal angle
    tan_alpha = first.dy / first.dx
    cot_beta = second.dx / second.dy
    return tan_alpha, cot_beta


def gprime_corner_from_slopes(tan_alpha, cot_beta) -> Fraction:
    """g'(1) = 4 + 2 tan(alpha) + 2 cot(beta)."""
    return 4 + 2 * Fraction(tan_alpha) + 2 * Fraction(cot_beta)


def _parallelogram(p, q) -> ConvexPolygon | None:
    """conv{±p, ±q} when it is a proper parallelogram, else None."""
    pts = [Point(Fraction(p[0]), Fraction(p[1])), Point(Fraction(q[0]), Fraction(q[1]))]
    try:
        P = convex_hull(pts + [-v for v in pts], "central")
    except DegenerateInput:
        return None
    return P if len(P) == 4 else None


def _terminal_case(L: ConvexPolygon) -> str | None:
    Q = square()
    if not in_class_F(Q, L):
        return None
    try:
        return classify_square_case(Q, L)
    except UnclassifiedConfiguration:
        return None


def edge_case_family(density: int = 8) -> list[ConvexPolygon]:
    """Parallelograms conv{±(c, d), ±(p, s)} that put (Q, L) in the edge case.

    c runs over 1 + 3k/density; (p, s) stays inside Q so that L crosses dQ
    only on the two vertical edges.  Candidates failing the classification
    are skipped.
    """
    out = []
    for k in range(1, density + 1):
        c = 1 + Fraction(3 * k, density)
        for d in (Fraction(-1, 4), Fraction(0), Fraction(1, 4)):
            for p in (Fraction(-1, 2), Fraction(0), Fraction(1, 2)):
                for s in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                    L = _parallelogram((c, d), (p, s))
                    if L is not None and _terminal_case(L) == "edge_case":
                        try:
                            edge_case_params(L)
                        except NotEdgeCase:
                            continue
                        out.append(L)
    return out


def corner_case_family(density: int = 4) -> list[ConvexPolygon]:
    """Parallelograms conv{±(-v1, v2), ±(w1, w2)} in the corner case.

    The vertex (-v1, v2) sits inside Q near the corner (-1, 1); (w1, w2) is
    beyond (1, 1), so L holds the corners (1, 1) and (-1, -1).
    """
    inner = [Fraction(j, 4) for j in (1, 2, 3)]
    outer = [1 + Fraction(2 * k, density) for k in range(1, density + 1)]
    out = []
    for v1 in inner:
        for v2 in inner:
            for w1 in outer:
                for w2 in outer:
                    L = _parallelogram((-v1, v2), (w1, w2))
                    if L is not None and _terminal_case(L) == "corner_case":
                        out.append(L)
    return out
