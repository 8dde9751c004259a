import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helixwarp.errors import ChartDomainError, DomainError
from helixwarp.geometry import (KAPPA_FLOOR, frenet_analytic_column,
                                frenet_from_curve, moving_frame_chart,
                                theta_derivatives)
from helixwarp.trajectory import (Curve, CurveParam, Seed, integrate_time,
                                  reparam_arc_length, reparam_axis_length)

HELIX_KAPPA = 0.5 / 4.25
HELIX_TORSION = 2.0 / 4.25


def synthetic_arc_curve(r, theta, z, s):
    zero = np.zeros_like(s)
    return Curve(param=CurveParam.ARC_LENGTH, grid=s, t=s, r=r, theta=theta,
                 z=z, vr=zero, vtheta=zero, vz=zero, speed=zero + 1.0,
                 seed=Seed(float(r[0])))


def unit_circle(h, n=None):
    n = n or int(round(2.0 / h)) + 1
    s = np.arange(n) * h
    return synthetic_arc_curve(np.ones(n), s.copy(), np.zeros(n), s)


def helix(h, a=0.5, omega=1.0, climb=2.0, s_total=1.0):
    q = math.sqrt(a * a * omega * omega + climb * climb)
    n = int(round(s_total / h)) + 1
    s = np.arange(n) * h
    t = s / q
    return synthetic_arc_curve(np.full(n, a), omega * t, climb * t, s)


def interior(frames):
    return [f for f in frames if not f.boundary and not f.degenerate]


class TestFrenetFromCurve:
    def test_unit_circle(self):
        frames = interior(frenet_from_curve(unit_circle(1e-3)))
        kappas = np.array([f.kappa for f in frames])
        torsions = np.array([f.torsion for f in frames])
        assert np.max(np.abs(kappas - 1.0)) <= 1e-8
        assert np.max(np.abs(torsions)) <= 1e-8

    def test_helix_values(self):
        frames = interior(frenet_from_curve(helix(2e-3)))
        kappas = np.array([f.kappa for f in frames])
        torsions = np.array([f.torsion for f in frames])
        assert np.max(np.abs(kappas / HELIX_KAPPA - 1.0)) <= 1e-7
        assert np.max(np.abs(torsions / HELIX_TORSION - 1.0)) <= 1e-6

    def test_fourth_order_convergence_in_truncation_regime(self):
        errs = {}
        for h in (4e-2, 2e-2):
            frames = interior(frenet_from_curve(helix(h, s_total=2.0)))
            errs[h] = (max(abs(f.kappa - HELIX_KAPPA) for f in frames),
                       max(abs(f.torsion - HELIX_TORSION) for f in frames))
        order_k = math.log(errs[4e-2][0] / errs[2e-2][0]) / math.log(2.0)
        order_t = math.log(errs[4e-2][1] / errs[2e-2][1]) / math.log(2.0)
        assert order_k >= 3.0
        assert order_t >= 2.5

    def test_straight_line_degenerate_everywhere(self):
        n = 101
        s = np.linspace(0.0, 1.0, n)
        curve = synthetic_arc_curve(np.full(n, 0.5), np.zeros(n), s.copy(), s)
        frames = frenet_from_curve(curve)
        assert all(f.degenerate for f in frames)
        assert all(f.kappa < KAPPA_FLOOR for f in frames)

    def test_binormal_orthonormal(self):
        frames = interior(frenet_from_curve(helix(1e-3)))
        for f in frames[::50]:
            assert abs(np.linalg.norm(f.b) - 1.0) <= 1e-10
            assert abs(f.b @ f.tau) <= 1e-10
            assert abs(f.b @ f.n) <= 1e-10
            assert np.max(np.abs(np.cross(f.tau, f.n) - f.b)) <= 1e-12

    def test_frame_closure_second_order(self):
        # d_s n = -kappa tau + T b and d_s b = -T n, residual O(h^2) via
        # differencing the already-computed frames
        def closure_residual(h):
            frames = frenet_from_curve(helix(h, s_total=2.0))
            sel = interior(frames)
            idx = [i for i, f in enumerate(frames)
                   if not f.boundary and not f.degenerate]
            worst = 0.0
            for j in range(1, len(sel) - 1):
                if idx[j + 1] - idx[j - 1] != 2:
                    continue
                f0, f1, f2 = sel[j - 1], sel[j], sel[j + 1]
                dn = (f2.n - f0.n) / (2 * h)
                db = (f2.b - f0.b) / (2 * h)
                worst = max(worst,
                            np.max(np.abs(dn + f1.kappa * f1.tau
                                          - f1.torsion * f1.b)),
                            np.max(np.abs(db + f1.torsion * f1.n)))
            return worst

        r1, r2 = closure_residual(4e-2), closure_residual(2e-2)
        assert r2 <= 1e-3
        assert r1 / r2 == pytest.approx(4.0, rel=0.5)

    def test_rejects_wrong_parameterization(self, column_uniform):
        curve = integrate_time(column_uniform, Seed(0.5), 0.5)
        with pytest.raises(DomainError):
            frenet_from_curve(curve)

    def test_stencil_validation(self):
        with pytest.raises(ValueError):
            frenet_from_curve(helix(1e-2), stencil=4)


class TestAnalyticColumnFrame:
    def test_constant_pitch_exact(self, column_uniform):
        fr = frenet_analytic_column(column_uniform, Seed(0.5), 0.3)
        assert fr.kappa == pytest.approx(HELIX_KAPPA, abs=1e-15)
        assert fr.torsion == pytest.approx(HELIX_TORSION, abs=1e-15)
        assert fr.ds_kappa == 0.0
        # constant-pitch helix normal points inward: n = -e_r, so n.e_theta = 0
        theta = 0.5 * 0.3 / 0.5  # omega t
        e_r = np.array([math.cos(theta), math.sin(theta), 0.0])
        assert np.max(np.abs(fr.n + e_r)) <= 1e-14
        e_th = np.array([-math.sin(theta), math.cos(theta), 0.0])
        assert abs(fr.n @ e_th) <= 1e-14

    def test_matches_fd_frames(self, column_oscillating):
        seed = Seed(0.5, 0.0, 0.5)
        curve = integrate_time(column_oscillating, seed, 0.8, tol=1e-12,
                               n_samples=400)
        arc = reparam_arc_length(curve, column_oscillating, n_samples=2400)
        frames = frenet_from_curve(arc)
        for i in range(600, 1800, 300):
            fd = frames[i]
            exact = frenet_analytic_column(column_oscillating, seed,
                                           float(arc.t[i]))
            assert fd.kappa == pytest.approx(exact.kappa, rel=1e-5)
            # torsion sweeps through zero; near the crossing only the
            # absolute error is meaningful
            assert fd.torsion == pytest.approx(exact.torsion, rel=1e-3,
                                               abs=5e-4)
            assert np.max(np.abs(fd.n - exact.n)) <= 1e-5
            assert np.max(np.abs(fd.b - exact.b)) <= 1e-5

    def test_zero_swirl_degenerate(self, tall_domain):
        from helixwarp.field import LinearSwirl, SwirlColumnField
        from helixwarp.flux import UniformFlux
        field = SwirlColumnField(tall_domain, UniformFlux(2.0), LinearSwirl(0.0))
        fr = frenet_analytic_column(field, Seed(0.5), 0.3)
        assert fr.degenerate
        assert fr.kappa == 0.0

    def test_ds_kappa_consistent_with_time_differences(self, column_oscillating):
        seed = Seed(0.5)
        t, dt = 0.5, 1e-6
        fp = frenet_analytic_column(column_oscillating, seed, t + dt)
        fm = frenet_analytic_column(column_oscillating, seed, t - dt)
        f0 = frenet_analytic_column(column_oscillating, seed, t)
        speed = math.hypot(0.5, float(column_oscillating.flux.value(t)))
        fd = (fp.kappa - fm.kappa) / (2 * dt) / speed
        assert f0.ds_kappa == pytest.approx(fd, rel=1e-5)


class TestThetaDerivatives:
    def test_column_uniform_flux(self, column_uniform):
        curve = integrate_time(column_uniform, Seed(0.5), 0.9, tol=1e-11)
        ax = reparam_axis_length(curve, column_uniform, n_samples=41)
        ders = theta_derivatives(ax, column_uniform)
        sel = ~ders.boundary
        assert np.allclose(ders.theta1[sel], 0.5, atol=1e-9)
        assert np.allclose(ders.theta2[sel], 0.0, atol=1e-7)
        assert np.allclose(ders.theta2_formula, 0.0, atol=1e-12)

    def test_column_power_law(self, column_powerlaw):
        # theta''(z) = -(W/r0) g'/g^3 exactly; the field formula carries the
        # leading term without the 1/r factor, so formula/r reproduces it
        curve = integrate_time(column_powerlaw, Seed(0.5), 0.6, tol=1e-12)
        ax = reparam_axis_length(curve, column_powerlaw, n_samples=81)
        ders = theta_derivatives(ax, column_powerlaw)
        sel = ~ders.boundary
        g = column_powerlaw.flux.value(ax.t[sel])
        g1 = column_powerlaw.flux.d1(ax.t[sel])
        g2 = column_powerlaw.flux.d2(ax.t[sel])
        exact2 = -g1 / g**3
        exact3 = -(g2 / g**4 - 3.0 * g1**2 / g**5)
        assert np.max(np.abs(ders.theta2[sel] - exact2)) <= 1e-6
        assert np.max(np.abs(ders.theta3[sel] - exact3)) <= 1e-4
        assert np.allclose(ders.theta2_formula[sel] / ax.r[sel], exact2,
                           rtol=1e-10)
        assert np.allclose(ders.theta3_formula[sel] / ax.r[sel], exact3,
                           rtol=1e-10)

    def test_no_swirl_all_zero(self, axial_powerlaw):
        curve = integrate_time(axial_powerlaw, Seed(0.5), 0.6, tol=1e-11)
        ax = reparam_axis_length(curve, axial_powerlaw, n_samples=41)
        ders = theta_derivatives(ax, axial_powerlaw)
        assert np.allclose(ders.theta1, 0.0, atol=1e-10)
        assert np.allclose(ders.theta2_formula, 0.0, atol=1e-12)

    def test_radial_slopes_returned(self, bump_field):
        curve = integrate_time(bump_field, Seed(0.45, 0.0, 0.3), 0.6,
                               tol=1e-10)
        ax = reparam_axis_length(curve, bump_field, n_samples=41)
        ders = theta_derivatives(ax, bump_field)
        vr = ax.vr
        vz = ax.vz
        assert np.allclose(ders.r1, vr / vz, atol=1e-12)


class TestMovingFrameChart:
    def test_stated_entries(self):
        chart = moving_frame_chart(0.1, 0.2, 0.3, 0.4)
        assert chart.M[0, 0] == pytest.approx(0.97)
        assert chart.M_inv[0, 0] == pytest.approx(1.0 / 0.97)
        assert chart.product_error <= 1e-15

    def test_on_curve_is_identity(self):
        chart = moving_frame_chart(0.8, -1.3, 0.0, 0.0)
        assert np.allclose(chart.M, np.eye(3))
        assert np.allclose(chart.M_inv, np.eye(3))

    def test_flat_frame_identity(self):
        chart = moving_frame_chart(0.0, 0.0, 0.5, -0.7)
        assert np.allclose(chart.M, np.eye(3))

    def test_tau_coefficients(self):
        kappa, torsion, rbar, zbar = 0.3, -0.6, 0.4, 0.9
        chart = moving_frame_chart(kappa, torsion, rbar, zbar)
        a = 1.0 - kappa * rbar
        expected = np.array([1.0 / a, -zbar * torsion / a, -rbar * torsion / a])
        assert np.allclose(chart.tau_coefficients, expected, atol=1e-15)

    def test_singularity_rejected(self):
        with pytest.raises(ChartDomainError):
            moving_frame_chart(2.0, 0.1, 0.5, 0.0)

    @given(kappa=st.floats(-3.0, 3.0), torsion=st.floats(-3.0, 3.0),
           rbar=st.floats(-0.3, 0.3), zbar=st.floats(-0.3, 0.3))
    @settings(max_examples=200, deadline=None)
    def test_product_identity_random_sweep(self, kappa, torsion, rbar, zbar):
        if abs(1.0 - kappa * rbar) <= 1e-6:
            return
        chart = moving_frame_chart(kappa, torsion, rbar, zbar)
        assert chart.product_error <= 1e-12
