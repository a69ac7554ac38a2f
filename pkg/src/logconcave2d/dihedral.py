"""D_n-symmetric smooth shapes in polar form and the angle-stretching map w.

A D_n-symmetric shape is fixed by its radial function on the sector
G_n = {theta in [0, pi/n]}; the full function is recovered by even
reflection and 2*pi/n periodicity.  w stretches angles by n/2, taking G_n
onto the quarter plane G_2 with constant Jacobian n/2, so

    |e^t K ∩ L| = 2n |e^t K ∩ L ∩ G_n| = |e^t w(K) ∩ w(L)|.

Everything here is floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import CurvatureViolated, InsufficientSamples, NotConvexProfile, OutsideSector

MIN_SAMPLES = 64
SECTOR_SLACK = 1e-12
CROSSING_XTOL = 1e-12

Profile = Callable[[np.ndarray], np.ndarray]


def fold_angle(theta, n: int):
    """Map any angle into [0, pi/n] using the D_n reflections."""
    period = 2 * math.pi / n
    phi = np.mod(theta, period)
    return np.minimum(phi, period - phi)


@dataclass
class RadialShape:
    """Radial function of a D_n-symmetric shape sampled on [0, pi/n].

    ``profile``, when present, is a closed form valid on the sector and is
    used for evaluation; otherwise a clamped cubic spline through the samples
    is used (clamped because evenness forces rho' = 0 at both sector ends).
    """

    n: int
    theta: np.ndarray
    rho: np.ndarray
    profile: Profile | None = None
    _spline: CubicSpline | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        self.rho = np.asarray(self.rho, dtype=float)
        if self.n < 2:
            raise ValueError("dihedral order must be at least 2")
        if np.any(self.rho <= 0):
            raise ValueError("radial function must be positive")
        if np.any(np.diff(self.theta) <= 0):
            raise ValueError("sample angles must increase")
        if abs(self.theta[0]) > SECTOR_SLACK or abs(self.theta[-1] - math.pi / self.n) > 1e-9:
            raise ValueError("samples must cover [0, pi/n]")

    @property
    def sector_width(self) -> float:
        return math.pi / self.n

    def radius(self, theta) -> np.ndarray:
        phi = fold_angle(np.asarray(theta, dtype=float), self.n)
        if self.profile is not None:
            return np.asarray(self.profile(phi), dtype=float) * np.ones_like(phi)
        if self._spline is None:
            self._spline = CubicSpline(self.theta, self.rho, bc_type="clamped")
        return self._spline(phi)


@dataclass(frozen=True)
class CurvatureResult:
    ok: bool
    min_margin: float


def _extended(rho: np.ndarray) -> np.ndarray:
    # even reflection at both sector ends
    return np.concatenate([rho[2:0:-1], rho, rho[-2:-4:-1]])


def curvature_condition(K: RadialShape) -> CurvatureResult:
    """min over samples of rho^2 + 2 rho'^2 - rho rho'' (five-point differences)."""
    if len(K.rho) < MIN_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_SAMPLES} samples, got {len(K.rho)}")
    h = K.theta[1] - K.theta[0]
    if not np.allclose(np.diff(K.theta), h, rtol=1e-9, atol=0):
        raise ValueError("curvature check needs uniformly spaced samples")
    f = _extended(K.rho)
    fm2, fm1, f0, fp1, fp2 = f[:-4], f[1:-3], f[2:-2], f[3:-1], f[4:]
    d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    margin = f0 ** 2 + 2 * d1 ** 2 - f0 * d2
    m = float(margin.min())
    return CurvatureResult(m > 0, m)


def w_point(p: Sequence[float], n: int) -> tuple[float, float]:
    """Stretch the angle of p in G_n by n/2 (radius preserved)."""
    x, y = float(p[0]), float(p[1])
    r = math.hypot(x, y)
    if r == 0:
        return (0.0, 0.0)
    theta = math.atan2(y, x)
    if theta < -SECTOR_SLACK or theta > math.pi / n + SECTOR_SLACK:
        raise OutsideSector(f"angle {theta} outside [0, pi/{n}]")
    theta = min(max(theta, 0.0), math.pi / n)
    phi = theta * n / 2
    return (r * math.cos(phi), r * math.sin(phi))


def w_shape(K: RadialShape) -> RadialShape:
    """The unconditional shape with rho_w(theta) = rho_K(2 theta / n)."""
    if not curvature_condition(K).ok:
        raise CurvatureViolated("input shape is not strongly convex")
    if K.n == 2:
        return K
    profile = None
    if K.profile is not None:
        base, n = K.profile, K.n
        profile = lambda th: base(2.0 * th / n)  # noqa: E731
    theta = K.theta * K.n / 2
    theta[-1] = math.pi / 2
    return RadialShape(2, theta, K.rho.copy(), profile)


def simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, intervals: int) -> float:
    """Composite Simpson rule; ``intervals`` is rounded up to an even number."""
    m = max(2, intervals + (intervals % 2))
    x = np.linspace(a, b, m + 1)
    y = f(x)
    h = (b - a) / m
    return float(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()))


def sector_area(K: RadialShape, a: float = 1.0, intervals: int = 1024) -> float:
    """Area of aK ∩ G_n, i.e. the integral of (a rho)^2 / 2 over [0, pi/n]."""
    intervals = max(intervals, 1024)
    return simpson(lambda th: 0.5 * (a * K.radius(th)) ** 2, 0.0, K.sector_width, intervals)


def _crossings(diff: Callable[[float], float], lo: float, hi: float, scan: int) -> list[float]:
    xs = np.linspace(lo, hi, scan + 1)
    vals = np.array([diff(x) for x in xs])
    roots = []
    for i in range(scan):
        if vals[i] == 0.0:
            roots.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0:
            roots.append(brentq(diff, xs[i], xs[i + 1], xtol=CROSSING_XTOL))
    return [r for r in roots if lo < r < hi]


def pair_area(K: RadialShape, L: RadialShape, t: float, lo: float, hi: float,
              intervals: int = 2048) -> float:
    """Integral of min(e^t rho_K, rho_L)^2 / 2 over [lo, hi].

    Crossing angles of the two radial curves become Simpson break points so
    that each panel integrates a smooth function.
    """
    s = math.exp(t)

    def diff(th):
        return float(s * K.radius(th) - L.radius(th))

    breaks = [lo] + _crossings(diff, lo, hi, max(256, intervals // 4)) + [hi]
    total = 0.0
    width = hi - lo
    for a, b in zip(breaks[:-1], breaks[1:]):
        m = max(2, math.ceil(intervals * (b - a) / width))
        total += simpson(lambda th: 0.5 * np.minimum(s * K.radius(th), L.radius(th)) ** 2, a, b, m)
    return total


def f_full(K: RadialShape, L: RadialShape, t: float, intervals: int = 2048) -> float:
    return pair_area(K, L, t, 0.0, 2 * math.pi, intervals)


def f_sector(K: RadialShape, L: RadialShape, t: float, intervals: int = 2048) -> float:
    """2n times the sector contribution."""
    return 2 * K.n * pair_area(K, L, t, 0.0, K.sector_width, intervals)


@dataclass
class IdentityReport:
    t: list[float]
    full: list[float]
    sector: list[float]
    w_image: list[float]
    max_dev_sector: float
    max_dev_w: float

    def log_second_differences(self) -> list[float]:
        lf = np.log(np.asarray(self.full))
        return [float(x) for x in lf[:-2] - 2 * lf[1:-1] + lf[2:]]


def dihedral_identity_check(K: RadialShape, L: RadialShape, t_grid: Sequence[float],
                            intervals: int = 2048) -> IdentityReport:
    """Evaluate f(t) three ways: full circle, 2n * sector, and via w(K), w(L)."""
    if K.n != L.n:
        raise ValueError("shapes must share the dihedral order")
    for S in (K, L):
        if not curvature_condition(S).ok:
            raise CurvatureViolated("both shapes must satisfy the curvature condition")
    wK, wL = w_shape(K), w_shape(L)
    ts = [float(t) for t in t_grid]
    full = [f_full(K, L, t, intervals) for t in ts]
    sector = [f_sector(K, L, t, intervals) for t in ts]
    wimg = [f_full(wK, wL, t, intervals) for t in ts]
    dev_s = max(abs(a - b) for a, b in zip(full, sector))
    dev_w = max(abs(a - b) for a, b in zip(full, wimg))
    return IdentityReport(ts, full, sector, wimg, dev_s, dev_w)


def w_jacobian_deviation(K: RadialShape, intervals: int = 4096) -> tuple[float, float]:
    """(|area(w(K) ∩ G_2) - (n/2) area(K ∩ G_n)|, area(K ∩ G_n))."""
    base = sector_area(K, 1.0, intervals)
    image = sector_area(w_shape(K), 1.0, intervals)
    return float(abs(image - K.n / 2 * base)), float(base)


def quadrature_allowance(K: RadialShape, L: RadialShape, t_grid: Sequence[float],
                         intervals: int = 2048) -> float:
    """Bound for the quadrature error in a second difference of log f.

    The Simpson error at ``intervals`` is estimated by Richardson,
    |f_N - f_{N/2}| / 15, relative to f; a second difference combines three
    values with weights 1, 2, 1, hence the factor 4.
    """
    worst = 0.0
    for t in t_grid:
        fine = f_full(K, L, float(t), intervals)
        coarse = f_full(K, L, float(t), intervals // 2)
        worst = max(worst, abs(fine - coarse) / 15 / fine)
    return float(4 * worst)


def parse_profile(expr: str, n: int, eps: float) -> Profile:
    """Compile an expression in theta, n and eps (e.g. "1+eps*cos(n*theta)")."""
    import sympy

    theta, n_sym, eps_sym = sympy.symbols("theta n eps")
    try:
        parsed = sympy.sympify(expr, locals={"theta": theta, "n": n_sym, "eps": eps_sym})
    except (sympy.SympifyError, TypeError) as exc:
        raise NotConvexProfile(f"cannot parse profile {expr!r}: {exc}") from exc
    extra = parsed.free_symbols - {theta, n_sym, eps_sym}
    if extra:
        raise NotConvexProfile(f"unknown symbols in profile: {sorted(map(str, extra))}")
    bound = parsed.subs({n_sym: n, eps_sym: eps})
    fn = sympy.lambdify(theta, bound, "numpy")
    return lambda th: np.asarray(fn(th), dtype=float) * np.ones_like(th, dtype=float)


def make_dn_shape(profile: Profile | str, n: int, samples: int = 2048,
                  eps: float = 0.0) -> RadialShape:
    """Sample a closed-form sector profile and validate it as a smooth D_n shape."""
    if isinstance(profile, str):
        profile = parse_profile(profile, n, eps)
    theta = np.linspace(0.0, math.pi / n, samples)
    rho = np.asarray(profile(theta), dtype=float)
    if np.any(rho <= 0):
        raise NotConvexProfile("profile must be positive")
    h = 1e-6
    for th in (0.0, math.pi / n):
        ends = profile(np.array([th - h, th + h]))
        slope = (ends[1] - ends[0]) / (2 * h)
        if abs(slope) > 1e-6 * float(rho.max()):
            raise NotConvexProfile(f"profile is not even about {th}: slope {slope}")
    shape = RadialShape(n, theta, rho, profile)
    cc = curvature_condition(shape)
    if not cc.ok:
        raise NotConvexProfile(f"curvature condition fails (min margin {cc.min_margin:.6g})")
    return shape


def profile_cosine(n: int, eps: float, sign: float = 1.0, radius: float = 1.0) -> Profile:
    """rho(theta) = radius * (1 + sign * eps * cos(n theta))."""
    return lambda th: radius * (1.0 + sign * eps * np.cos(n * np.asarray(th, dtype=float)))


def polygon_approximation(K: RadialShape, vertices: int = 2048) -> list[tuple[float, float]]:
    """Vertices of the inscribed polygon at equally spaced angles."""
    th = np.linspace(0.0, 2 * math.pi, vertices, endpoint=False)
    r = K.radius(th)
    return list(zip((r * np.cos(th)).tolist(), (r * np.sin(th)).tolist()))
