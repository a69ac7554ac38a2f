"""Reduction of a transversal pair to parallelogram pairs.

Each opposite pair of boundary components S_i, S_{i+n} of dK ∩ L yields an
extended pair (K_i, L_i): K_i is the largest convex set whose boundary still
carries S_i ∪ S_{i+n}, L_i the parallelogram cut out by the two L edge lines
crossed at the endpoints of S_i.  Either may be an infinite strip, in which
case both are truncated by a common symmetric strip.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import cos, pi, sin

from .dynamics import g_at, g_derivative_at, property_B_check
from .errors import (
    NoValidStrip, NotAParallelogram, NotTransversal, UnclassifiedConfiguration,
)
from .geometry import (
    ConvexPolygon, Direction, Matrix, area, clip_halfplane, contains, convex_hull,
    dot, edge_outer_normal, intersect, inverse, linear_map, polygon_from_chain,
    solve2, square,
)
from .transversal import BoundaryComponent, boundary_components, in_class_F

STRIP_FACTOR = 8
FAN_SIZE = 32
MAX_DEPTH = 2


@dataclass(frozen=True)
class Slab:
    """The centrally symmetric strip {x : |<normal, x>| <= halfwidth}."""

    normal: Direction
    halfwidth: Fraction

    def halfplanes(self):
        n = self.normal
        return [(n, self.halfwidth), (Direction(-n.dx, -n.dy), self.halfwidth)]


Extension = ConvexPolygon | Slab


def _slab_pair_polygon(a: Slab, b: Slab) -> ConvexPolygon:
    if a.normal.parallel_to(b.normal):
        raise NoValidStrip("parallel strips have unbounded intersection")
    pts = [solve2(a.normal.dx, a.normal.dy, b.normal.dx, b.normal.dy, sa * a.halfwidth, sb * b.halfwidth)
           for sa in (1, -1) for sb in (1, -1)]
    return convex_hull(pts, "central")


def _clip_by_slab(P: ConvexPolygon, s: Slab) -> ConvexPolygon | None:
    pts = list(P.vertices)
    for nrm, off in s.halfplanes():
        pts = clip_halfplane(pts, nrm, off)
        if not pts:
            return None
    return polygon_from_chain(pts, "none")


def intersect_extensions(A: Extension, B: Extension) -> ConvexPolygon | None:
    if isinstance(A, Slab) and isinstance(B, Slab):
        return _slab_pair_polygon(A, B)
    if isinstance(A, Slab):
        A, B = B, A
    if isinstance(B, Slab):
        return _clip_by_slab(A, B)
    return intersect(A, B)


def _component(K, L, i) -> tuple[BoundaryComponent, int]:
    comps = boundary_components(K, L)
    n = len(comps) // 2
    if not 0 <= i < n:
        raise IndexError(f"component index {i} out of range 0..{n - 1}")
    return comps[i], n


def extend_K(K: ConvexPolygon, L: ConvexPolygon, i: int) -> Extension:
    """Largest convex set whose boundary contains S_i ∪ S_{i+n}.

    x1 is the counterclockwise-first endpoint of S_i.  The apex x solves
    <nu(x1), x> = h(nu(x1)), <nu(x2), x> = -h(nu(x2)).
    """
    S, _ = _component(K, L, i)
    e1, e2 = S.k_edges[0], S.k_edges[-1]
    n1, n2 = edge_outer_normal(K, e1), edge_outer_normal(K, e2)
    h1 = dot(n1, K.vertices[e1])
    if len(S.k_edges) == 1:
        return Slab(n1, h1)
    h2 = dot(n2, K.vertices[e2])
    x = solve2(n1.dx, n1.dy, n2.dx, n2.dy, h1, -h2)
    pts = list(S.polyline) + list(S.negated()) + [x, -x]
    return convex_hull(pts, "central")


def extend_L(K: ConvexPolygon, L: ConvexPolygon, i: int) -> Extension:
    """Parallelogram bounded by the L edge lines through x1 and x2 and their negations."""
    S, _ = _component(K, L, i)
    m1, m2 = edge_outer_normal(L, S.l_start), edge_outer_normal(L, S.l_end)
    c1, c2 = dot(m1, L.vertices[S.l_start]), dot(m2, L.vertices[S.l_end])
    if m1.parallel_to(m2):
        return Slab(m1, c1)
    return _slab_pair_polygon(Slab(m1, c1), Slab(m2, c2))


@dataclass(frozen=True)
class ExtendedPair:
    K_ext: ConvexPolygon
    L_ext: ConvexPolygon
    strip_used: Slab | None
    source_component: int


def _fan() -> list[Direction]:
    out = []
    for k in range(FAN_SIZE):
        a = pi * k / FAN_SIZE
        out.append(Direction(Fraction(cos(a)).limit_denominator(64),
                             Fraction(sin(a)).limit_denominator(64)))
    return out


def bounding_strip(K, L, K_ext: Extension, L_ext: Extension, source_component: int = 0) -> ExtendedPair:
    """Truncate unbounded extensions by one symmetric strip A.

    A's normal is the first candidate (edge normals of K and L, then a fan of
    32 rational directions) not parallel to the normal of an unbounded
    extension; its halfwidth is 8 times the largest projection of the
    relevant vertices, so A keeps K, L, any bounded extension and
    K_ext ∩ L_ext strictly inside.
    """
    unbounded = [E for E in (K_ext, L_ext) if isinstance(E, Slab)]
    if not unbounded:
        return ExtendedPair(K_ext, L_ext, None, source_component)
    core = intersect_extensions(K_ext, L_ext)
    if core is None:
        raise NotTransversal("extensions do not overlap")
    verts = list(K.vertices) + list(L.vertices) + list(core.vertices)
    for E in (K_ext, L_ext):
        if isinstance(E, ConvexPolygon):
            verts += list(E.vertices)
    candidates = [edge_outer_normal(P, j) for P in (K, L) for j in range(len(P))] + _fan()
    for u in candidates:
        if any(u.parallel_to(E.normal) for E in unbounded):
            continue
        width = STRIP_FACTOR * max(abs(dot(u, v)) for v in verts)
        A = Slab(u, width)
        Kt = _slab_pair_polygon(K_ext, A) if isinstance(K_ext, Slab) else K_ext
        Lt = _slab_pair_polygon(L_ext, A) if isinstance(L_ext, Slab) else L_ext
        return ExtendedPair(Kt, Lt, A, source_component)
    raise NoValidStrip("no candidate strip direction works")


def reduce_pair(K: ConvexPolygon, L: ConvexPolygon) -> list[ExtendedPair]:
    """One extended pair per opposite pair of boundary components."""
    comps = boundary_components(K, L)
    n = len(comps) // 2
    out = []
    for i in range(n):
        Ke, Le = extend_K(K, L, i), extend_L(K, L, i)
        out.append(bounding_strip(K, L, Ke, Le, i))
    return out


@dataclass(frozen=True)
class AdditivityLedger:
    g_total: Fraction
    g_parts: tuple[Fraction, ...]
    gprime_total: Fraction
    gprime_parts: tuple[Fraction, ...]

    @property
    def g_balanced(self) -> bool:
        return sum(self.g_parts, Fraction(0)) == self.g_total

    @property
    def gprime_balanced(self) -> bool:
        return sum(self.gprime_parts, Fraction(0)) == self.gprime_total


def additivity_ledger(K, L, pairs: list[ExtendedPair]) -> AdditivityLedger:
    return AdditivityLedger(
        g_at(K, L, 1),
        tuple(g_at(p.K_ext, p.L_ext, 1) for p in pairs),
        g_derivative_at(K, L, 1),
        tuple(g_derivative_at(p.K_ext, p.L_ext, 1) for p in pairs),
    )


def is_parallelogram(P: ConvexPolygon) -> bool:
    vs = P.vertices
    return len(vs) == 4 and vs[2] == -vs[0] and vs[3] == -vs[1]


def normalize_parallelogram(K_par: ConvexPolygon, L: ConvexPolygon) -> tuple[Matrix, ConvexPolygon]:
    """T with T(Q) = K_par and det T > 0, together with T^{-1} L.

    The corner (1, 1) of Q goes to the vertex of K_par maximizing x + y
    (ties: larger x), so axis-aligned rectangles give diagonal T.
    """
    if not is_parallelogram(K_par):
        raise NotAParallelogram("expected a centrally symmetric quadrilateral")
    vs = K_par.vertices
    k = max(range(4), key=lambda j: (vs[j].x + vs[j].y, vs[j].x))
    v0, v1 = vs[k], vs[(k + 1) % 4]
    c1 = (v0 - v1).times(Fraction(1, 2))
    c2 = (v0 + v1).times(Fraction(1, 2))
    T = ((c1.x, c2.x), (c1.y, c2.y))
    return T, linear_map(L, inverse(T))


CASES = ("containment", "edge_case", "corner_case", "swap_then_classify")


def classify_square_case(Q: ConvexPolygon, L_par: ConvexPolygon) -> str:
    """Which terminal case the pair (Q, L_par) falls into."""
    inside_Q = sum(contains(Q, v, strict=True) for v in L_par.vertices)
    inside_L = sum(contains(L_par, v, strict=True) for v in Q.vertices)
    if inside_Q == len(L_par) or inside_L == len(Q):
        return "containment"
    if inside_Q == 2 and inside_L == 0:
        return "edge_case"
    if inside_Q == 2 and inside_L == 2:
        return "corner_case"
    if inside_Q == 0 and inside_L > 0:
        return "swap_then_classify"
    if inside_Q == 0 and inside_L == 0 and _opposite_edge_band(Q, L_par):
        return "edge_case"
    raise UnclassifiedConfiguration(
        f"{inside_Q} vertices of L in Q, {inside_L} corners of Q in L")


def _opposite_edge_band(Q, L) -> bool:
    """dQ ∩ L is two pieces, each inside one edge, on opposite edges."""
    comps = boundary_components(Q, L)
    return len(comps) == 2 and all(len(c.k_edges) == 1 for c in comps)


@dataclass(frozen=True)
class TerminalCase:
    """A normalized pair (Q, L) reached by the reduction, with its case label."""

    L: ConvexPolygon
    case: str
    det_T: Fraction
    path: tuple[int, ...]


def terminal_cases(K: ConvexPolygon, L: ConvexPolygon) -> list[TerminalCase]:
    """Run the full reduction down to square/parallelogram pairs.

    (K, L) -> (K_i, L_i) -> ((L_i)_j, (K_i)_j), both parallelograms, then
    normalize the first to Q and classify.  Four-component leftovers get one
    more reduction pass; swaps renormalize on the other parallelogram.
    """
    if not in_class_F(K, L):
        raise NotTransversal("pair is not transversal")
    out: list[TerminalCase] = []
    for p in reduce_pair(K, L):
        for pp in reduce_pair(p.L_ext, p.K_ext):
            _classify_into(pp.K_ext, pp.L_ext, (p.source_component, pp.source_component), 0, out)
    return out


def _classify_into(P1, P2, path, depth, out):
    T, L2 = normalize_parallelogram(P1, P2)
    Q = square()
    try:
        case = classify_square_case(Q, L2)
    except UnclassifiedConfiguration:
        if depth >= MAX_DEPTH:
            raise
        for pp in reduce_pair(Q, L2):
            _classify_into(pp.K_ext, pp.L_ext, path + (pp.source_component,), depth + 1, out)
        return
    if case == "swap_then_classify":
        T2, Q2 = normalize_parallelogram(P2, P1)
        case2 = classify_square_case(Q, Q2)
        out.append(TerminalCase(Q2, case2, T2[0][0] * T2[1][1] - T2[0][1] * T2[1][0], path + (-1,)))
        return
    out.append(TerminalCase(L2, case, T[0][0] * T[1][1] - T[0][1] * T[1][0], path))


def decomposition_bound(K, L, pairs: list[ExtendedPair]) -> tuple[Fraction, Fraction, bool]:
    """Evaluate the ends of |K∩L| sum(g_i + g_i') <= sum g_i^2 <= g^2.

    Each term obeys |K∩L| b_i <= g_i^2 with b_i = g_i + g_i': trivially when
    b_i <= 0, and through |K∩L| <= |K_i∩L_i| and property B of the i-th pair
    otherwise.  Returns (lhs, rhs, all_parts_hold).
    """
    reports = [property_B_check(p.K_ext, p.L_ext) for p in pairs]
    lhs = area(intersect(K, L)) * sum((r.g1 + r.g1_prime for r in reports), Fraction(0))
    rhs = sum((r.g1 for r in reports), Fraction(0)) ** 2
    return lhs, rhs, all(r.holds for r in reports)
