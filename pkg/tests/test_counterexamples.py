"""Certified failures of log-concavity without central symmetry."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logconcave2d.counterexamples import (
    Q_GRID, R_GRID, certify_quasiconcave_violation, certify_uniform_violation,
    monte_carlo_defect, quasi_concave_density, quasi_concave_measure_of_scaled_Q,
    quasi_midpoint_defect, search_midpoint_violation, symmetrized_rectangle,
    uniform_counterexample,
)
from logconcave2d.dynamics import area_at, midpoint_logconcavity_check, proper_scale_window
from logconcave2d.geometry import area, convex_hull, is_centrally_symmetric, linear_map

F = Fraction


def closed_form(a):
    """|aK ∩ L| for 5/6 <= a <= 3: the triangle minus a tip of height 3 - a."""
    return 25 - (3 - a) ** 2


class TestUniformPair:
    def test_shapes(self):
        K, L = uniform_counterexample()
        assert area(K) == 48 and area(L) == 25
        assert not is_centrally_symmetric(K) and not is_centrally_symmetric(L)

    def test_mirror_symmetry(self):
        for P in uniform_counterexample():
            mirrored = convex_hull([(-v.x, v.y) for v in P.vertices])
            assert mirrored.vertices == P.vertices

    def test_exact_witness(self):
        w = certify_uniform_violation()
        q, r = F(7, 8), F(1799, 1792)
        assert w.scales == (q, q * r, q * r * r)
        assert w.scales[1:] == (F(1799, 2048), F(462343, 524288))
        assert w.defect == F(-516023739, 1099511627776) < 0

    def test_values_follow_the_closed_form(self):
        w = certify_uniform_violation()
        assert w.values == tuple(closed_form(a) for a in w.scales)
        F1, F2, F3 = w.values
        assert w.defect == F2 * F2 - F1 * F3

    def test_first_hit_in_grid_order(self):
        K, L = uniform_counterexample()
        w = certify_uniform_violation()
        for q in Q_GRID:
            for r in R_GRID:
                if (q, q * r) == w.scales[:2]:
                    return
                assert midpoint_logconcavity_check(K, L, q, r).defect >= 0
        pytest.fail("witness not on the committed grid")

    def test_witness_is_in_the_proper_range(self):
        K, L = uniform_counterexample()
        lo, hi = proper_scale_window(K, L)
        assert (lo, hi) == (F(3, 7), 3)
        for a in certify_uniform_violation().scales:
            assert lo < a < hi
            assert 0 < area_at(K, L, a) < min(a * a * area(K), area(L))

    def test_linear_homogeneity(self):
        # doubling both shapes multiplies F by 4 and the defect by 16
        K, L = uniform_counterexample()
        T = ((2, 0), (0, 2))
        K2, L2 = linear_map(K, T), linear_map(L, T)
        w = certify_uniform_violation()
        q, r = w.scales[0], w.scales[1] / w.scales[0]
        w2 = midpoint_logconcavity_check(K2, L2, q, r)
        assert (w2.F_q, w2.F_qr, w2.F_qr2) == tuple(4 * v for v in w.values)
        assert w2.defect == 16 * w.defect

    def test_symmetrized_rectangle_shows_no_violation(self):
        _, L = uniform_counterexample()
        S = symmetrized_rectangle()
        assert is_centrally_symmetric(S)
        assert search_midpoint_violation(S, L) is None


class TestMonteCarlo:
    def test_confirms_the_sign(self):
        K, L = uniform_counterexample()
        est = monte_carlo_defect(K, L, certify_uniform_violation().scales, samples=10**6, seed=1)
        assert est.defect < 0 and est.sigmas >= 3
        assert est.defect == pytest.approx(float(certify_uniform_violation().defect), abs=4 * est.stderr)

    def test_seeded_runs_repeat(self):
        K, L = uniform_counterexample()
        scales = certify_uniform_violation().scales
        assert monte_carlo_defect(K, L, scales, 10**5, seed=3) == monte_carlo_defect(K, L, scales, 10**5, seed=3)

    def test_scales_must_be_geometric(self):
        K, L = uniform_counterexample()
        with pytest.raises(ValueError):
            monte_carlo_defect(K, L, (1, 2, 5), samples=1000)

    def test_zero_defect_for_a_log_linear_pair(self):
        # K = L = a centred square and scales below 1: F(a) = 4 a^2, defect 0
        Q = convex_hull([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        est = monte_carlo_defect(Q, Q, (F(1, 2), F(5, 8), F(25, 32)), samples=10**5, seed=0)
        assert abs(est.defect) <= 4 * est.stderr + 1e-12


class TestQuasiConcave:
    def test_measure_values(self):
        mu = quasi_concave_measure_of_scaled_Q
        assert mu(0.0) == 8.0
        assert mu(1.0) == pytest.approx(4 + 4 * math.e ** 2, rel=1e-15)
        assert mu(-1.0) == pytest.approx(8 * math.exp(-2), rel=1e-15)

    def test_measure_integrates_the_density(self):
        t = 0.4
        s = math.exp(t)
        xs = (np.arange(4000) + 0.5) / 4000 * 2 * s - s
        X, Y = np.meshgrid(xs, xs)
        dens = np.where(np.maximum(np.abs(X), np.abs(Y)) <= 1, 2.0, 1.0)
        approx = dens.sum() * (2 * s / 4000) ** 2
        assert approx == pytest.approx(quasi_concave_measure_of_scaled_Q(t), rel=1e-3)
        assert quasi_concave_density(0.5, -0.5) == 2.0 and quasi_concave_density(1.5, 0) == 1.0

    @given(st.tuples(*[st.floats(-3, 3)] * 4), st.floats(0, 1))
    def test_density_is_quasi_concave(self, pts, lam):
        x1, y1, x2, y2 = pts
        mid = quasi_concave_density((1 - lam) * x1 + lam * x2, (1 - lam) * y1 + lam * y2)
        assert mid >= min(quasi_concave_density(x1, y1), quasi_concave_density(x2, y2))

    def test_midpoint_defect(self):
        w = certify_quasiconcave_violation()
        assert w.scales == pytest.approx((0.9, 1.0, 1.1))
        assert w.defect < 0
        ratio = quasi_midpoint_defect(1.0, 0.1) / quasi_midpoint_defect(1.0, 0.01)
        assert 95 <= ratio <= 105

    def test_log_linear_below_zero(self):
        # for t + h <= 0 the measure is 8 e^{2t}, so the defect vanishes
        assert quasi_midpoint_defect(-1.0, 0.1) == pytest.approx(0.0, abs=1e-14)


def test_json_forms():
    js = certify_uniform_violation().to_json()
    assert js["defect"]["exact"] == "-516023739/1099511627776"
    assert js["scales"][0] == {"exact": "7/8", "decimal": 0.875}
    assert certify_quasiconcave_violation().to_json()["defect"]["decimal"] < 0
