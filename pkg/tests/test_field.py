import math

import numpy as np
import pytest

from helixwarp.errors import AxisTouchError, ConfigError, DomainError
from helixwarp.field import (AxisymmetricField, ComponentJet, CylinderDomain,
                             FieldJet, GaussianSwirl, LinearSwirl,
                             StreamFunctionField, SwirlColumnField,
                             UniformAxialField, axial_velocity_floor,
                             divergence_residual, eval_field, euler_residual,
                             field_from_config, swirl_transport_residual)
from helixwarp.flux import OscillatingFlux, PowerLawFlux, UniformFlux
from helixwarp.trajectory import Seed, integrate_time

POINTS = [(0.35, 0.8, 0.25), (0.62, 1.9, 0.6), (0.15, 2.4, 0.45)]


# ---------------------------------------------------------------------------
# independent symbolic oracle for the analytic jets
# ---------------------------------------------------------------------------

def _sympy_component_jets(vr_expr, vth_expr, vz_expr, symbols):
    import sympy as sp

    r, z, t = symbols
    jets = {}
    for name, expr in (("vr", vr_expr), ("vtheta", vth_expr), ("vz", vz_expr)):
        entries = {
            "val": expr,
            "dr": sp.diff(expr, r), "dz": sp.diff(expr, z), "dt": sp.diff(expr, t),
            "drr": sp.diff(expr, r, 2), "drz": sp.diff(expr, r, z),
            "drt": sp.diff(expr, r, t), "dzz": sp.diff(expr, z, 2),
            "dzt": sp.diff(expr, z, t), "dtt": sp.diff(expr, t, 2),
        }
        jets[name] = {k: sp.lambdify((r, z, t), e, "numpy")
                      for k, e in entries.items()}
    return jets


def _compare_jet(field: AxisymmetricField, oracle, pts, tol=1e-9):
    for (rr, zz, tt) in pts:
        jet = field.jet(rr, zz, tt)
        for name in ("vr", "vtheta", "vz"):
            mine: ComponentJet = getattr(jet, name)
            for entry, fn in oracle[name].items():
                expected = float(fn(rr, zz, tt))
                got = getattr(mine, entry)
                assert got == pytest.approx(expected, rel=tol, abs=tol), (
                    f"{name}.{entry} at {(rr, zz, tt)}")


class TestSymbolicOracle:
    def test_stream_function_constant_amp(self, bump_field):
        sp = pytest.importorskip("sympy")
        r, z, t = sp.symbols("r z t", positive=True)
        m = 1.0
        g = sp.Float(2.0)
        amp = sp.Float(0.08)
        chi0 = sp.exp(-2.0 * (0.0 - 1.5) ** 2)
        chi = sp.exp(-2.0 * (z - 1.5) ** 2) - chi0
        phi = r**2 * (m - r**2) ** 2
        psi = g * r**2 / 2 + amp * phi * chi
        vr = -sp.diff(psi, z) / r
        vz = sp.diff(psi, r) / r
        oracle = _sympy_component_jets(vr, sp.Float(0.0), vz, (r, z, t))
        _compare_jet(bump_field, oracle, POINTS)

    def test_stream_function_flux_amp_with_swirl(self, bump_domain):
        sp = pytest.importorskip("sympy")
        field = StreamFunctionField(
            bump_domain, OscillatingFlux(1.0, 2.0), amplitude=0.05,
            z_center=1.5, z_decay=2.0, amp_mode="flux",
            swirl=GaussianSwirl(amp=0.7, width=1.3))
        r, z, t = sp.symbols("r z t", positive=True)
        g = 2 + (1 - t) ** sp.Float(1.0) * sp.sin((1 - t) ** sp.Float(-2.0))
        amp = sp.Float(0.05) * g
        chi = sp.exp(-2.0 * (z - 1.5) ** 2) - sp.exp(-2.0 * (0.0 - 1.5) ** 2)
        phi = r**2 * (1.0 - r**2) ** 2
        psi = g * r**2 / 2 + amp * phi * chi
        vr = -sp.diff(psi, z) / r
        vz = sp.diff(psi, r) / r
        vth = sp.Float(0.7) * r * sp.exp(-sp.Float(1.3) * r**2)
        oracle = _sympy_component_jets(vr, vth, vz, (r, z, t))
        _compare_jet(field, oracle, POINTS, tol=1e-8)

    def test_swirl_column_gaussian(self, tall_domain):
        sp = pytest.importorskip("sympy")
        field = SwirlColumnField(tall_domain, PowerLawFlux(1.5),
                                 GaussianSwirl(amp=0.9, width=2.0))
        r, z, t = sp.symbols("r z t", positive=True)
        g = (1 - t) ** sp.Float(-1.5)
        vth = sp.Float(0.9) * r * sp.exp(-2.0 * r**2)
        oracle = _sympy_component_jets(sp.Float(0.0), vth, g, (r, z, t))
        _compare_jet(field, oracle, POINTS)


class TestJetsAgainstFiniteDifferences:
    @pytest.mark.parametrize("which", ["column", "bump"])
    def test_first_partials_converge(self, which, column_oscillating, bump_field):
        field = column_oscillating if which == "column" else bump_field
        rr, zz, tt = 0.45, 1.2, 0.4

        def fd_errors(h):
            jet = field.jet(rr, zz, tt)
            worst = 0.0
            for i, name in enumerate(("vr", "vtheta", "vz")):
                comp = getattr(jet, name)
                fd_r = (field.velocity(rr + h, zz, tt)[i]
                        - field.velocity(rr - h, zz, tt)[i]) / (2 * h)
                fd_z = (field.velocity(rr, zz + h, tt)[i]
                        - field.velocity(rr, zz - h, tt)[i]) / (2 * h)
                fd_t = (field.velocity(rr, zz, tt + h)[i]
                        - field.velocity(rr, zz, tt - h)[i]) / (2 * h)
                worst = max(worst, abs(comp.dr - fd_r), abs(comp.dz - fd_z),
                            abs(comp.dt - fd_t))
            return worst

        e1, e2 = fd_errors(1e-3), fd_errors(5e-4)
        assert e2 <= 1e-4
        assert e1 / max(e2, 1e-14) > 3.0  # second-order central differences

    def test_second_partials_match_fd_of_first(self, bump_field):
        rr, zz, tt = 0.5, 1.7, 0.3
        h = 1e-5
        jet = bump_field.jet(rr, zz, tt)
        for name in ("vr", "vtheta", "vz"):
            comp = getattr(jet, name)
            d_rp = getattr(bump_field.jet(rr + h, zz, tt), name)
            d_rm = getattr(bump_field.jet(rr - h, zz, tt), name)
            d_zp = getattr(bump_field.jet(rr, zz + h, tt), name)
            d_zm = getattr(bump_field.jet(rr, zz - h, tt), name)
            assert comp.drr == pytest.approx((d_rp.dr - d_rm.dr) / (2 * h), abs=1e-6)
            assert comp.drz == pytest.approx((d_zp.dr - d_zm.dr) / (2 * h), abs=1e-6)
            assert comp.dzz == pytest.approx((d_zp.dz - d_zm.dz) / (2 * h), abs=1e-6)


class TestEvaluation:
    def test_uniform_axial_anywhere(self, axial_uniform):
        jet = eval_field(axial_uniform, 0.7, 3.0, 0.5)
        assert (jet.vr.val, jet.vtheta.val, jet.vz.val) == (0.0, 0.0, 2.0)
        assert jet.vz.dr == jet.vz.dz == 0.0

    def test_column_example(self, column_uniform):
        vr, vth, vz = column_uniform.velocity(0.5, 2.0, 0.3)
        assert (vr, vth, vz) == (0.0, 0.5, 2.0)

    def test_axis_regularity(self, column_uniform, bump_field):
        for field in (column_uniform, bump_field):
            vr, vth, _ = field.velocity(0.0, 1.0, 0.2)
            assert vr == 0.0 and vth == 0.0

    def test_domain_errors(self, column_uniform):
        with pytest.raises(DomainError):
            eval_field(column_uniform, 1.5, 1.0, 0.1)
        with pytest.raises(DomainError):
            eval_field(column_uniform, 0.5, -1.0, 0.1)
        with pytest.raises(DomainError):
            eval_field(column_uniform, 0.5, 1.0, 1.0)

    def test_unilateral_floor_positive(self, bump_field, column_oscillating):
        assert axial_velocity_floor(bump_field, [0.1, 0.5, 0.9]) > 0.0
        assert axial_velocity_floor(column_oscillating, [0.1, 0.9]) >= 1.0


class TestDivergence:
    def test_stream_function_solenoidal(self, bump_field):
        for (rr, zz, tt) in POINTS:
            assert abs(divergence_residual(bump_field, rr, zz, tt)) <= 1e-12

    def test_column_exactly_zero(self, column_oscillating):
        assert divergence_residual(column_oscillating, 0.5, 1.0, 0.4) == 0.0

    def test_axis_limit_form(self, bump_field):
        assert abs(divergence_residual(bump_field, 0.0, 1.2, 0.3)) <= 1e-12

    def test_non_solenoidal_probe(self, tall_domain):
        class RadialProbe(AxisymmetricField):
            domain = tall_domain
            flux = UniformFlux(1.0)

            def jet(self, r, z, t):
                return FieldJet(vr=ComponentJet(val=r, dr=1.0),
                                vtheta=ComponentJet(0.0),
                                vz=ComponentJet(0.0))

        assert divergence_residual(RadialProbe(), 0.4, 1.0, 0.1) == pytest.approx(2.0)


class TestEulerResidual:
    @pytest.mark.parametrize("flux", [UniformFlux(2.0), PowerLawFlux(1.0),
                                      OscillatingFlux(1.0, 2.0)])
    def test_column_is_exact_solution(self, tall_domain, flux):
        field = SwirlColumnField(tall_domain, flux, LinearSwirl(1.0))
        pressure = field.exact_pressure()
        for r in np.linspace(0.1, 0.9, 5):
            for z in np.linspace(0.5, 9.5, 5):
                for t in np.linspace(0.0, 0.9, 5):
                    res = euler_residual(field, pressure, float(r), float(z),
                                         float(t))
                    assert res.max_abs <= 1e-10

    def test_uniform_axial_zero_pressure(self, axial_uniform):
        res = euler_residual(axial_uniform, axial_uniform.exact_pressure(),
                             0.5, 1.0, 0.3)
        assert res.max_abs == 0.0

    def test_stream_function_negative_control(self, bump_field):
        class ZeroPressure:
            def value(self, r, z, t):
                return 0.0

            def d_r(self, r, z, t):
                return 0.0

            def d_z(self, r, z, t):
                return 0.0

        res = euler_residual(bump_field, ZeroPressure(), 0.5, 1.2, 0.3)
        assert res.max_abs > 1e-3

    def test_missing_pressure_is_config_error(self, bump_field):
        with pytest.raises(ConfigError):
            euler_residual(bump_field, None, 0.5, 1.0, 0.1)


class TestSwirlTransport:
    def test_column_transports_exactly(self, column_oscillating):
        curve = integrate_time(column_oscillating, Seed(0.5, 0.0, 0.5), 0.8,
                               tol=1e-10)
        assert swirl_transport_residual(column_oscillating, curve) <= 1e-12

    def test_no_swirl_is_trivially_zero(self, axial_uniform):
        curve = integrate_time(axial_uniform, Seed(0.5, 0.0, 0.5), 0.8,
                               tol=1e-10)
        assert swirl_transport_residual(axial_uniform, curve) == 0.0

    def test_non_euler_field_reported_not_asserted(self, bump_domain):
        field = StreamFunctionField(bump_domain, UniformFlux(2.0),
                                    amplitude=0.08, z_center=1.5,
                                    swirl=GaussianSwirl(amp=0.5, width=1.0))
        curve = integrate_time(field, Seed(0.5, 0.0, 0.2), 0.5, tol=1e-10)
        residual = swirl_transport_residual(field, curve)
        assert math.isfinite(residual)

    def test_axis_touch_rejected(self, axial_uniform):
        curve = integrate_time(axial_uniform, Seed(1e-9, 0.0, 0.5), 0.8)
        assert curve.status == "axis-touch"
        with pytest.raises(AxisTouchError):
            swirl_transport_residual(axial_uniform, curve)


class TestConfigFactory:
    def test_all_kinds(self, tall_domain):
        f1 = field_from_config({"kind": "uniform_axial"}, tall_domain,
                               UniformFlux(2.0))
        assert isinstance(f1, UniformAxialField)
        f2 = field_from_config({"kind": "swirl_column",
                                "swirl": {"kind": "gaussian", "amp": 0.5,
                                          "width": 2.0}},
                               tall_domain, UniformFlux(2.0))
        assert isinstance(f2.swirl, GaussianSwirl)
        f3 = field_from_config({"kind": "stream_function", "amplitude": 0.1},
                               tall_domain, UniformFlux(2.0))
        assert isinstance(f3, StreamFunctionField)

    def test_unknown_kind(self, tall_domain):
        with pytest.raises(ConfigError):
            field_from_config({"kind": "vortex_ring"}, tall_domain,
                              UniformFlux(2.0))
