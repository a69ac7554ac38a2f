"""Certified failures of log-concavity when the symmetry hypotheses are dropped.

1. A rectangle and a triangle sharing only the mirror axis x = 0:
   F(a) = |aK ∩ L| violates F(qr)^2 >= F(q) F(qr^2) near a = 1.
2. The quasi-concave measure mu(A) = |A ∩ Q| + |A| on the dilates e^t Q,
   whose logarithm is convex for t >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dynamics import midpoint_logconcavity_check
from .errors import NoViolationFound
from .geometry import ConvexPolygon, convex_hull, rectangle

# committed search grid: q = k/64, r = 1 + j/256
Q_GRID = tuple(Fraction(k, 64) for k in range(56, 73))
R_GRID = tuple(1 + Fraction(j, 256) for j in range(1, 9))
# fallback when the committed grid misses: double the r-resolution once
R_GRID_FALLBACK = tuple(1 + Fraction(j, 512) for j in range(1, 17))

MC_SAMPLES = 10**7
QUASI_T = 1.0
QUASI_H = 0.1


@dataclass(frozen=True)
class ViolationWitness:
    scales: tuple
    values: tuple
    defect: Fraction | float
    context: str

    def to_json(self) -> dict:
        from .serialize import scalar_json

        def enc(x):
            return scalar_json(x) if isinstance(x, Fraction) else {"decimal": x}

        return {
            "context": self.context,
            "scales": [enc(s) for s in self.scales],
            "values": [enc(v) for v in self.values],
            "defect": enc(self.defect),
        }


def uniform_counterexample() -> tuple[ConvexPolygon, ConvexPolygon]:
    """K = [-6, 6] x [-3, 1] and L = conv{(-5, -2), (0, 3), (5, -2)}."""
    K = rectangle(-6, 6, -3, 1)
    L = convex_hull([(-5, -2), (0, 3), (5, -2)])
    return K, L


def symmetrized_rectangle() -> ConvexPolygon:
    """[-6, 6] x [-2, 2]: the centrally symmetric rectangle of the same height."""
    return rectangle(-6, 6, -2, 2)


def search_midpoint_violation(K, L, q_grid=Q_GRID, r_grid=R_GRID):
    """First (q, r) in grid order (q outer, r inner) with a negative exact defect."""
    for q in q_grid:
        for r in r_grid:
            w = midpoint_logconcavity_check(K, L, q, r)
            if w.defect < 0:
                return w
    return None


def certify_uniform_violation() -> ViolationWitness:
    K, L = uniform_counterexample()
    w = search_midpoint_violation(K, L)
    if w is None:
        w = search_midpoint_violation(K, L, Q_GRID, R_GRID_FALLBACK)
    if w is None:
        raise NoViolationFound("committed grid (and its refinement) found no violation")
    q, r = w.q, w.r
    return ViolationWitness(
        (q, q * r, q * r * r), (w.F_q, w.F_qr, w.F_qr2), w.defect,
        "uniform measure on L, one-axis-symmetric K: F(qr)^2 - F(q) F(qr^2) < 0")


def _gauge(K: ConvexPolygon, pts: np.ndarray) -> np.ndarray:
    """Minkowski functional of K (origin in its interior) at each row of pts."""
    vs = [(float(v.x), float(v.y)) for v in K.vertices]
    best = np.full(len(pts), -np.inf)
    for i in range(len(vs)):
        (ax, ay), (bx, by) = vs[i], vs[(i + 1) % len(vs)]
        nx, ny = by - ay, ax - bx
        h = nx * ax + ny * ay
        best = np.maximum(best, (pts[:, 0] * nx + pts[:, 1] * ny) / h)
    return best


def _inside(P: ConvexPolygon, pts: np.ndarray) -> np.ndarray:
    vs = [(float(v.x), float(v.y)) for v in P.vertices]
    ok = np.ones(len(pts), dtype=bool)
    for i in range(len(vs)):
        (ax, ay), (bx, by) = vs[i], vs[(i + 1) % len(vs)]
        ok &= (bx - ax) * (pts[:, 1] - ay) - (by - ay) * (pts[:, 0] - ax) >= 0
    return ok


def _float_area(P: ConvexPolygon) -> float:
    vs = [(float(v.x), float(v.y)) for v in P.vertices]
    return 0.5 * sum(vs[i - 1][0] * vs[i][1] - vs[i][0] * vs[i - 1][1] for i in range(len(vs)))


def _sample_shell(K: ConvexPolygon, lo: float, hi: float, n: int, rng) -> np.ndarray:
    """Uniform points in hi*K minus lo*K (K star-shaped about the origin).

    Polar-type coordinates s * p with p on dK: the Jacobian is s times the
    area of the fan triangle holding p, so pick an edge by fan area, p
    uniformly on it and s with density proportional to s.
    """
    vs = np.array([(float(v.x), float(v.y)) for v in K.vertices])
    nxt = np.roll(vs, -1, axis=0)
    fan = 0.5 * (vs[:, 0] * nxt[:, 1] - vs[:, 1] * nxt[:, 0])
    edge = rng.choice(len(vs), size=n, p=fan / fan.sum())
    u = rng.random(n)[:, None]
    p = vs[edge] + u * (nxt[edge] - vs[edge])
    s = np.sqrt(lo * lo + rng.random(n) * (hi * hi - lo * lo))
    return p * s[:, None]


@dataclass(frozen=True)
class MonteCarloEstimate:
    defect: float
    stderr: float
    samples: int

    @property
    def sigmas(self) -> float:
        return -self.defect / self.stderr if self.stderr > 0 else math.inf


def monte_carlo_defect(K: ConvexPolygon, L: ConvexPolygon, scales, samples: int = MC_SAMPLES,
                       seed: int = 0) -> MonteCarloEstimate:
    """Float Monte Carlo estimate of F(a2)^2 - F(a1) F(a3), independent of clipping.

    The scales form a geometric triple a2 = r a1, a3 = r a2, so the copies of
    K are nested and F(a2) = F(a1) + D1, F(a3) = F(a2) + D2 with D1, D2 the
    areas of L inside the shells between consecutive copies.  The second
    shell is r times the first, so each point x of the first shell is
    coupled with r x; the two indicators then agree except near dL, which
    is what makes D1 - D2 (and hence the defect) resolvable.  Nine tenths
    of the samples go into the first shell, the rest uniformly into L's
    bounding box to estimate F(a1).
    """
    a1, a2, a3 = (float(a) for a in scales)
    r = a2 / a1
    if not math.isclose(a3 / a2, r, rel_tol=1e-12):
        raise ValueError("scales must form a geometric triple")
    rng = np.random.default_rng(seed)
    n_shell = samples * 9 // 10
    n_box = samples - n_shell

    shell_area = _float_area(K) * (a2 * a2 - a1 * a1)
    pts = _sample_shell(K, a1, a2, n_shell, rng)
    y1 = _inside(L, pts).astype(float)
    y2 = _inside(L, pts * r).astype(float)
    D1 = shell_area * y1.mean()
    D2 = shell_area * r * r * y2.mean()
    cov = np.cov(np.vstack([y1, r * r * y2])) * shell_area ** 2 / n_shell

    xs = np.array([float(v.x) for v in L.vertices])
    ys = np.array([float(v.y) for v in L.vertices])
    box = np.column_stack([rng.uniform(xs.min(), xs.max(), n_box),
                           rng.uniform(ys.min(), ys.max(), n_box)])
    box_area = (xs.max() - xs.min()) * (ys.max() - ys.min())
    hit = (_inside(L, box) & (_gauge(K, box) <= a1)).astype(float)
    F1 = box_area * hit.mean()
    var_F1 = box_area ** 2 * hit.var() / n_box

    # defect = F1 (D1 - D2) + D1^2; delta-method standard error
    defect = F1 * (D1 - D2) + D1 * D1
    g = np.array([F1 + 2 * D1, -F1])
    var = (D1 - D2) ** 2 * var_F1 + float(g @ cov @ g)
    return MonteCarloEstimate(float(defect), math.sqrt(var), samples)


def quasi_concave_measure_of_scaled_Q(t: float) -> float:
    """mu(e^t Q) = |e^t Q ∩ Q| + |e^t Q| = 4 min(e^{2t}, 1) + 4 e^{2t}."""
    return 4 * min(math.exp(2 * t), 1.0) + 4 * math.exp(2 * t)


def quasi_concave_density(x: float, y: float) -> float:
    """Density 1 + 1_Q of mu; its superlevel sets are the plane and Q."""
    return 2.0 if max(abs(x), abs(y)) <= 1 else 1.0


def quasi_midpoint_defect(t: float, h: float) -> float:
    mu = quasi_concave_measure_of_scaled_Q
    return math.log(mu(t)) - 0.5 * (math.log(mu(t - h)) + math.log(mu(t + h)))


def certify_quasiconcave_violation(h: float = QUASI_H, t: float = QUASI_T) -> ViolationWitness:
    mu = quasi_concave_measure_of_scaled_Q
    ts = (t - h, t, t + h)
    defect = quasi_midpoint_defect(t, h)
    return ViolationWitness(
        ts, tuple(mu(s) for s in ts), defect,
        "quasi-concave measure |A ∩ Q| + |A| on e^t Q: log mu(t) - mean of neighbours < 0")
