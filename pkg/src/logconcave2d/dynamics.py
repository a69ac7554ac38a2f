"""The area function F(a) = |aK ∩ L|, its boundary flux g and log-concavity tests.

With f(t) = F(e^t) one has f(0) = |K ∩ L|, f'(0) = g(1) and
f''(0) = g(1) + g'(1), so local log-concavity at t = 0 is the exact
rational inequality |K ∩ L| (g(1) + g'(1)) <= g(1)^2.

For an edge e = [v, v + d] of K the flux through r*e ∩ L is
cross(v, v + d) * r * (hi - lo), where [lo, hi] is the parameter interval of
the edge inside L.  A crossing cut by the L edge <m, x> = c moves with r so
that r * s(r) = c/<m,d> - r <m,v>/<m,d>; its derivative is the constant
-<m,v>/<m,d>.  Both g and g' are therefore rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotTransversal, ZeroArea
from .geometry import ConvexPolygon, area, cross, dot, edge_halfplane, intersect, scale
from .transversal import edge_cuts, in_class_F

STRUCTURE_PROBE = Fraction(1, 10**6)


def area_at(K: ConvexPolygon, L: ConvexPolygon, a) -> Fraction:
    """Exact |aK ∩ L| (zero when the intersection has no interior)."""
    inter = intersect(scale(K, a), L)
    return area(inter) if inter is not None else Fraction(0)


def g_at(K: ConvexPolygon, L: ConvexPolygon, r=1) -> Fraction:
    """Boundary flux g_{K,L}(r); no transversality requirement."""
    r = Fraction(r)
    vs = K.vertices
    total = Fraction(0)
    for c in edge_cuts(K, L, r):
        v, w = vs[c.edge], vs[(c.edge + 1) % len(vs)]
        total += cross(v, w) * r * c.length
    return total


def _structure(K, L, r):
    return tuple((c.edge, c.lo_by, c.hi_by) for c in edge_cuts(K, L, r))


def require_transversal(K: ConvexPolygon, L: ConvexPolygon) -> None:
    """Raise NotTransversal unless (K, L) is transversal with stable structure near r = 1."""
    if not in_class_F(K, L):
        raise NotTransversal("pair violates the transversality conditions")
    cuts = edge_cuts(K, L, 1)
    if any(c.tie for c in cuts):
        raise NotTransversal("a crossing is degenerate at r = 1")
    here = tuple((c.edge, c.lo_by, c.hi_by) for c in cuts)
    for r in (1 - STRUCTURE_PROBE, 1 + STRUCTURE_PROBE):
        if _structure(K, L, r) != here:
            raise NotTransversal("boundary structure changes near r = 1")


def g_value(K: ConvexPolygon, L: ConvexPolygon) -> Fraction:
    require_transversal(K, L)
    return g_at(K, L, 1)


def g_derivative_at(K: ConvexPolygon, L: ConvexPolygon, r=1) -> Fraction:
    """d/dr of the flux, assembled from the per-crossing rates."""
    r = Fraction(r)
    vs = K.vertices
    hps = [edge_halfplane(c, d) for c, d in L.edges()]
    total = Fraction(0)
    for c in edge_cuts(K, L, r):
        v, w = vs[c.edge], vs[(c.edge + 1) % len(vs)]
        d = w - v

        def rate(by, endpoint):
            if by is None:
                return endpoint
            m, _ = hps[by]
            return -dot(m, v) / dot(m, d)

        total += cross(v, w) * (rate(c.hi_by, 1) - rate(c.lo_by, 0))
    return total


def g_derivative(K: ConvexPolygon, L: ConvexPolygon) -> Fraction:
    require_transversal(K, L)
    return g_derivative_at(K, L, 1)


def g_finite_difference(K: ConvexPolygon, L: ConvexPolygon, h: float = 1e-6) -> float:
    """Central difference of g at r = 1 in floating point (cross-check only)."""
    hf = Fraction(h)
    return float((g_at(K, L, 1 + hf) - g_at(K, L, 1 - hf)) / (2 * hf))


@dataclass(frozen=True)
class PropertyBReport:
    area_KL: Fraction
    g1: Fraction
    g1_prime: Fraction
    lhs: Fraction
    rhs: Fraction
    holds: bool

    def to_json(self) -> dict:
        from .serialize import scalar_json
        return {
            "area_KL": scalar_json(self.area_KL),
            "g1": scalar_json(self.g1),
            "g1_prime": scalar_json(self.g1_prime),
            "lhs": scalar_json(self.lhs),
            "rhs": scalar_json(self.rhs),
            "holds": self.holds,
        }


def property_B_report(area_KL, g1, g1_prime) -> PropertyBReport:
    lhs = area_KL * (g1 + g1_prime)
    rhs = g1 * g1
    return PropertyBReport(area_KL, g1, g1_prime, lhs, rhs, lhs <= rhs)


def property_B_check(K: ConvexPolygon, L: ConvexPolygon) -> PropertyBReport:
    require_transversal(K, L)
    return property_B_report(area_at(K, L, 1), g_at(K, L, 1), g_derivative_at(K, L, 1))


@dataclass(frozen=True)
class MidpointWitness:
    q: Fraction
    r: Fraction
    F_q: Fraction
    F_qr: Fraction
    F_qr2: Fraction
    defect: Fraction

    @property
    def violated(self) -> bool:
        return self.defect < 0

    def to_json(self) -> dict:
        from .serialize import scalar_json
        return {k: scalar_json(getattr(self, k)) for k in ("q", "r", "F_q", "F_qr", "F_qr2", "defect")}


def midpoint_logconcavity_check(K, L, q, r) -> MidpointWitness:
    """Exact midpoint test F(qr)^2 >= F(q) F(qr^2) at scales q, qr, qr^2."""
    q, r = Fraction(q), Fraction(r)
    if q <= 0 or r <= 0 or r == 1:
        raise ValueError("need q > 0, r > 0 and r != 1")
    values = [area_at(K, L, q * r ** k) for k in range(3)]
    if any(v == 0 for v in values):
        raise ZeroArea("an intersection in the triple has zero area")
    Fq, Fqr, Fqr2 = values
    return MidpointWitness(q, r, Fq, Fqr, Fqr2, Fqr * Fqr - Fq * Fqr2)


def _gauge(P: ConvexPolygon, p) -> Fraction:
    """Exact Minkowski functional of P (origin interior) at p."""
    best = None
    for a, b in P.edges():
        normal, offset = edge_halfplane(a, b)
        val = dot(normal, p) / offset
        best = val if best is None else max(best, val)
    return best


def proper_scale_window(K: ConvexPolygon, L: ConvexPolygon) -> tuple[Fraction, Fraction]:
    """(a_lo, a_hi) such that aK ∩ L is proper (neither body inside the other) exactly on it.

    aK ⊆ L iff a <= 1 / max gauge_L(vertices of K); L ⊆ aK iff
    a >= max gauge_K(vertices of L).  Both bodies must contain the origin
    in their interiors.
    """
    for P in (K, L):
        if any(edge_halfplane(a, b)[1] <= 0 for a, b in P.edges()):
            raise ValueError("the origin must lie inside both bodies")
    lo = 1 / max(_gauge(L, v) for v in K.vertices)
    hi = max(_gauge(K, v) for v in L.vertices)
    return lo, hi


def midpoint_grid(K: ConvexPolygon, L: ConvexPolygon, count: int = 9) -> list[tuple[Fraction, Fraction]]:
    """``count`` rational (q, r) pairs whose triples q, qr, qr^2 lie inside the proper window.

    The window is first shrunk inward to multiples of 1/64 when it is wide
    enough.  With w = (a_hi - a_lo)/(count + 3), q_j = a_lo + (j + 1) w and
    r_j = 1 + w/(4 q_j), so q_j r_j^2 < q_j + w.
    """
    lo, hi = proper_scale_window(K, L)
    if lo >= hi:
        return []
    # shrink to a 1/64 grid when possible: small denominators keep the exact areas cheap
    lo64, hi64 = Fraction(math.ceil(lo * 64), 64), Fraction(math.floor(hi * 64), 64)
    if lo64 < hi64:
        lo, hi = lo64, hi64
    w = (hi - lo) / (count + 3)
    out = []
    for j in range(count):
        q = lo + (j + 1) * w
        out.append((q, 1 + w / (4 * q)))
    return out


def midpoint_scan(K: ConvexPolygon, L: ConvexPolygon, grid) -> list[MidpointWitness]:
    return [midpoint_logconcavity_check(K, L, q, r) for q, r in grid]


@dataclass
class SampledFunction:
    entries: list[tuple[float, float]]
    meta: dict = field(default_factory=dict)

    def second_differences(self) -> list[float]:
        vals = [v for _, v in self.entries]
        return [vals[i - 1] - 2 * vals[i] + vals[i + 1] for i in range(1, len(vals) - 1)]

    def to_csv(self) -> str:
        lines = ["t,logf"]
        lines += [f"{t:.17g},{v:.17g}" for t, v in self.entries]
        return "\n".join(lines) + "\n"


def sample_logf(K, L, t_min: float, t_max: float, steps: int) -> SampledFunction:
    """Sample log F(e^t) on a uniform grid of ``steps`` points.

    e^t is replaced by the exact rational value of the double ``math.exp(t)``
    (relative error below 1e-15); F is then evaluated exactly.  Samples with
    empty intersection are dropped and listed in ``meta["dropped"]``.
    """
    if not t_min < t_max:
        raise ValueError("t_min must be below t_max")
    if steps < 3:
        raise ValueError("need at least 3 steps")
    entries = []
    dropped = []
    for i in range(steps):
        t = t_min + (t_max - t_min) * i / (steps - 1)
        F = area_at(K, L, Fraction(math.exp(t)))
        if F == 0:
            dropped.append(t)
            continue
        entries.append((t, math.log(F.numerator) - math.log(F.denominator)))
    meta = {"description": "t, log|e^t K ∩ L|", "dropped": dropped}
    return SampledFunction(entries, meta)
