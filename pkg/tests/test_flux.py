import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helixwarp.errors import DomainError
from helixwarp.flux import (FluxWindow, OscillatingFlux, PowerLawFlux,
                            UniformFlux, eval_flux, find_flux_windows,
                            flux_from_config, verify_flux_derivatives,
                            window_condition)


class TestEvalFlux:
    def test_uniform_triple(self):
        assert eval_flux(UniformFlux(2.0), 0.3) == (2.0, 0.0, 0.0)

    def test_power_law_triple_at_half(self):
        g, g1, g2 = eval_flux(PowerLawFlux(1.0), 0.5)
        assert g == pytest.approx(2.0)
        assert g1 == pytest.approx(4.0)
        assert g2 == pytest.approx(16.0)

    def test_oscillating_value_at_zero(self):
        g, _, _ = eval_flux(OscillatingFlux(2.0, 1.0), 0.0)
        assert g == pytest.approx(2.0 + math.sin(1.0), abs=1e-12)

    def test_oscillating_stays_positive(self):
        prof = OscillatingFlux(1.0, 2.0)
        t = np.linspace(0.0, 1.0 - 1e-9, 10_001)
        assert np.all(prof.value(t) >= 1.0)

    def test_singular_at_one(self):
        with pytest.raises(DomainError, match="singular at t=1"):
            eval_flux(PowerLawFlux(1.0), 1.0)

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            eval_flux(UniformFlux(2.0), -0.1)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            PowerLawFlux(-1.0)
        with pytest.raises(ValueError):
            OscillatingFlux(0.0, 2.0)


class TestDerivativeSelfCheck:
    def test_uniform_exact(self):
        err = verify_flux_derivatives(UniformFlux(2.0), [0.1, 0.5, 0.9], 1e-4)
        assert err == 0.0

    def test_power_law(self):
        err = verify_flux_derivatives(PowerLawFlux(1.0), [0.5], 1e-5)
        assert err <= 1e-6

    def test_oscillating(self):
        err = verify_flux_derivatives(OscillatingFlux(1.0, 2.0), [0.5], 1e-6)
        assert err <= 1e-4

    def test_second_order_rate(self):
        # truncation-dominated regime: halving h cuts the error ~4x
        prof = OscillatingFlux(1.0, 2.0)
        e1 = verify_flux_derivatives(prof, [0.3], 2e-3)
        e2 = verify_flux_derivatives(prof, [0.3], 1e-3)
        assert e1 / e2 == pytest.approx(4.0, rel=0.35)

    def test_out_of_domain_sample(self):
        with pytest.raises(DomainError):
            verify_flux_derivatives(UniformFlux(2.0), [0.9999999], 1e-3)


class TestWindows:
    def test_uniform_empty(self):
        assert find_flux_windows(UniformFlux(2.0), 0.1, 2_000).is_empty

    def test_power_law_empty(self):
        assert find_flux_windows(PowerLawFlux(1.0), 0.1, 2_000).is_empty

    def test_power_law_condition_never_holds(self):
        # eps g'^2/g < eps^2 g'' reduces to beta < eps (beta + 1): false here
        prof = PowerLawFlux(1.0)
        t = np.linspace(0.9, 1.0 - 1e-9, 50_000)
        assert not np.any(window_condition(prof, 0.1, t))

    def test_oscillating_nonempty(self, oscillating_window):
        assert not oscillating_window.is_empty
        for lo, hi in oscillating_window.intervals:
            assert 0.9 <= lo < hi < 1.0

    def test_condition_holds_inside_intervals(self, oscillating_window):
        prof = OscillatingFlux(1.0, 2.0)
        cell = 0.1 / 200_000
        subset = oscillating_window.intervals[::97]
        for lo, hi in subset:
            if hi - lo <= 2 * cell:
                continue
            probes = np.linspace(lo + cell, hi - cell, 7)
            assert np.all(window_condition(prof, 0.1, probes))

    def test_refinement_keeps_intervals_clean(self, oscillating_window):
        # interior points at 10x the scan resolution still pass, up to one
        # original grid cell at each endpoint
        prof = OscillatingFlux(1.0, 2.0)
        cell = 0.1 / 200_000
        for lo, hi in oscillating_window.intervals[::53]:
            if hi - lo <= 2 * cell:
                continue
            fine = np.linspace(lo + cell, hi - cell,
                               max(11, int((hi - lo) / cell) * 10))
            assert np.all(window_condition(prof, 0.1, fine))

    def test_resolution_validation(self):
        with pytest.raises(ValueError):
            find_flux_windows(UniformFlux(2.0), 0.1, 10)
        with pytest.raises(ValueError):
            find_flux_windows(UniformFlux(2.0), 1.5, 2_000)

    def test_window_invariants_enforced(self):
        with pytest.raises(ValueError):
            FluxWindow(epsilon=0.1, intervals=((0.5, 0.95),))
        with pytest.raises(ValueError):
            FluxWindow(epsilon=0.1, intervals=((0.92, 0.95), (0.94, 0.96)))

    def test_contains(self):
        w = FluxWindow(epsilon=0.1, intervals=((0.91, 0.92),))
        assert w.contains(0.915)
        assert not w.contains(0.93)

    @given(eps=st.floats(0.03, 0.3),
           beta1=st.floats(0.5, 2.0), beta2=st.floats(1.0, 2.5))
    @settings(max_examples=12, deadline=None)
    def test_found_windows_satisfy_condition_midpoint(self, eps, beta1, beta2):
        prof = OscillatingFlux(beta1, beta2)
        window = find_flux_windows(prof, eps, 5_000)
        for lo, hi in window.intervals:
            assert bool(window_condition(prof, eps, 0.5 * (lo + hi)))


class TestConfigFactory:
    def test_kinds(self):
        assert isinstance(flux_from_config({"kind": "uniform", "value": 3.0}),
                          UniformFlux)
        assert isinstance(flux_from_config({"kind": "power_law", "beta": 2.0}),
                          PowerLawFlux)
        prof = flux_from_config({"kind": "oscillating", "beta1": 1.0,
                                 "beta2": 2.0})
        assert isinstance(prof, OscillatingFlux)

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            flux_from_config({"kind": "sawtooth"})
