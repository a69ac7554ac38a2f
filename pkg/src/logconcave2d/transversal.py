"""Transversality of polygon pairs and the boundary components of dK ∩ L."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import NoCrossings, NotTransversal, PerturbationFailed
from .geometry import (
    ConvexPolygon, Direction, Point, cross, dot, edge_halfplane, edge_outer_normal,
    hausdorff_distance, scale,
)

VIOLATION_KINDS = ("infinite_intersection", "vertex_on_crossing", "parallel_normals")


class Violation(NamedTuple):
    kind: str
    location: Point


@dataclass(frozen=True)
class TransversalityDiagnosis:
    violations: tuple[Violation, ...] = ()
    crossings: tuple[Point, ...] = ()

    @property
    def in_class(self) -> bool:
        return not self.violations


def _segment_contact(a: Point, b: Point, c: Point, d: Point):
    """Classify how segments ab and cd meet.

    Returns None, ("point", p) or ("overlap", p) where p is a witness point.
    """
    r = b - a
    s = d - c
    denom = cross(r, s)
    qp = c - a
    if denom == 0:
        if cross(qp, r) != 0:
            return None
        rr = dot(r, r)
        t0 = dot(qp, r) / rr
        t1 = t0 + dot(s, r) / rr
        lo, hi = max(min(t0, t1), Fraction(0)), min(max(t0, t1), Fraction(1))
        if lo > hi:
            return None
        p = a + r.times(lo)
        return ("overlap", p) if lo < hi else ("point", p)
    t = cross(qp, s) / denom
    u = cross(qp, r) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return ("point", a + r.times(t))
    return None


def check_class_F(K: ConvexPolygon, L: ConvexPolygon) -> TransversalityDiagnosis:
    """Exact test of the transversality conditions for (K, L).

    Checks that dK ∩ dL is finite, contains no vertex of either polygon and
    that the two edge normals differ at every crossing.  Central symmetry is
    a precondition and is not re-checked here.
    """
    violations: list[Violation] = []
    crossings: list[Point] = []
    kv, lv = set(K.vertices), set(L.vertices)
    k_edges, l_edges = K.edges(), L.edges()
    for i, (a, b) in enumerate(k_edges):
        for j, (c, d) in enumerate(l_edges):
            hit = _segment_contact(a, b, c, d)
            if hit is None:
                continue
            kind, p = hit
            if kind == "overlap":
                violations.append(Violation("infinite_intersection", p))
                continue
            if p in kv or p in lv:
                violations.append(Violation("vertex_on_crossing", p))
                continue
            if edge_outer_normal(K, i).same_as(edge_outer_normal(L, j)):
                violations.append(Violation("parallel_normals", p))
                continue
            crossings.append(p)
    unique_v = tuple(dict.fromkeys(violations))
    return TransversalityDiagnosis(unique_v, tuple(dict.fromkeys(crossings)))


def in_class_F(K: ConvexPolygon, L: ConvexPolygon) -> bool:
    return check_class_F(K, L).in_class


def _diameter_sq(P: ConvexPolygon) -> Fraction:
    vs = P.vertices
    return max(dot(p - q, p - q) for p in vs for q in vs)


def perturb_to_F(K: ConvexPolygon, L: ConvexPolygon, eps) -> tuple[ConvexPolygon, ConvexPolygon]:
    """Scale L by (1 + delta), delta = eps, eps/2, ..., until the pair is transversal."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if in_class_F(K, L):
        return K, L
    diam_sq = max(_diameter_sq(K), _diameter_sq(L))
    delta = eps
    for _ in range(21):
        L2 = scale(L, 1 + delta)
        if in_class_F(K, L2):
            if hausdorff_distance(L, L2).squared <= eps * eps * diam_sq:
                return K, L2
        delta /= 2
    raise PerturbationFailed(f"no transversal scaling of L found from eps={eps}")


@dataclass(frozen=True)
class EdgeCut:
    """The parameter interval [lo, hi] of edge ``edge`` of rK lying inside L.

    ``lo_by``/``hi_by`` name the L edge that cuts the interval, or None when
    the bound is the edge's own endpoint.  ``tie`` flags a bound attained by
    two constraints at once (a crossing through an L vertex).
    """

    edge: int
    lo: Fraction
    hi: Fraction
    lo_by: int | None
    hi_by: int | None
    tie: bool = False

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def edge_cuts(K: ConvexPolygon, L: ConvexPolygon, r=1) -> list[EdgeCut]:
    """Nonempty pieces of r*dK inside L, one per edge of K (in K's edge order)."""
    r = Fraction(r)
    halfplanes = [edge_halfplane(c, d) for c, d in L.edges()]
    cuts = []
    for i, (v, w) in enumerate(K.edges()):
        d = w - v
        lowers: list[tuple[Fraction, int | None]] = [(Fraction(0), None)]
        uppers: list[tuple[Fraction, int | None]] = [(Fraction(1), None)]
        empty = False
        for j, (m, c) in enumerate(halfplanes):
            A = r * dot(m, d)
            B = c - r * dot(m, v)
            if A == 0:
                if B < 0:
                    empty = True
                    break
                continue
            (uppers if A > 0 else lowers).append((B / A, j))
        if empty:
            continue
        lo, lo_by = max(lowers, key=lambda t: t[0])
        hi, hi_by = min(uppers, key=lambda t: t[0])
        if lo > hi:
            continue
        tie = (lo == hi
               or sum(1 for s, _ in lowers if s == lo) > 1
               or sum(1 for s, _ in uppers if s == hi) > 1)
        cuts.append(EdgeCut(i, lo, hi, lo_by, hi_by, tie))
    return cuts


@dataclass(frozen=True)
class BoundaryComponent:
    """One connected piece S_i of dK ∩ L, traversed counterclockwise on dK.

    ``start``/``end`` are the crossing points x1, x2; ``k_edges`` the K edges
    the piece runs along (first holds x1, last holds x2); ``l_start``/``l_end``
    the L edges crossed at x1 and x2.
    """

    index: int
    partner_index: int
    polyline: tuple[Point, ...]
    k_edges: tuple[int, ...]
    l_start: int
    l_end: int

    @property
    def start(self) -> Point:
        return self.polyline[0]

    @property
    def end(self) -> Point:
        return self.polyline[-1]

    def negated(self) -> tuple[Point, ...]:
        return tuple(-p for p in self.polyline)


def boundary_components(K: ConvexPolygon, L: ConvexPolygon) -> list[BoundaryComponent]:
    """Components S_1..S_2n of dK ∩ L with S_{i+n} = -S_i.

    Numbering starts from the first entry crossing met when walking dK
    counterclockwise from K's first vertex.
    """
    if not in_class_F(K, L):
        raise NotTransversal("pair is not transversal")
    cuts = {c.edge: c for c in edge_cuts(K, L)}
    nk = len(K)
    entries = [e for e, c in sorted(cuts.items()) if c.lo_by is not None]
    if not entries:
        raise NoCrossings("boundaries do not cross (one body contains the other or dK misses L)")
    comps: list[BoundaryComponent] = []
    vs = K.vertices
    for e0 in entries:
        c0 = cuts[e0]
        d0 = vs[(e0 + 1) % nk] - vs[e0]
        poly = [vs[e0] + d0.times(c0.lo)]
        edges = [e0]
        e = e0
        while cuts[e].hi_by is None:
            e = (e + 1) % nk
            poly.append(vs[e])
            edges.append(e)
        ce = cuts[e]
        de = vs[(e + 1) % nk] - vs[e]
        poly.append(vs[e] + de.times(ce.hi))
        comps.append(BoundaryComponent(0, 0, tuple(poly), tuple(edges), c0.lo_by, ce.hi_by))
    total = len(comps)
    if total % 2:
        raise NotTransversal("odd number of boundary components; inputs not centrally symmetric")
    half = total // 2
    out = []
    for i, c in enumerate(comps):
        partner = (i + half) % total
        out.append(BoundaryComponent(i, partner, c.polyline, c.k_edges, c.l_start, c.l_end))
    for i in range(half):
        if out[i + half].polyline != out[i].negated():
            raise NotTransversal("components are not paired by negation; inputs not centrally symmetric")
    return out


def normal_at(P: ConvexPolygon, edge: int) -> Direction:
    return edge_outer_normal(P, edge)


__all__ = [
    "BoundaryComponent", "EdgeCut", "TransversalityDiagnosis", "Violation",
    "boundary_components", "check_class_F", "edge_cuts", "in_class_F",
    "normal_at", "perturb_to_F",
]
