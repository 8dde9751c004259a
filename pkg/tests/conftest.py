import numpy as np
import pytest

from helixwarp.field import (CylinderDomain, LinearSwirl, StreamFunctionField,
                             SwirlColumnField, UniformAxialField)
from helixwarp.flux import OscillatingFlux, PowerLawFlux, UniformFlux


@pytest.fixture(scope="session")
def tall_domain():
    return CylinderDomain(r_max=1.0, z_min=0.0, z_max=10.0, t_max=1.0)


@pytest.fixture(scope="session")
def column_uniform(tall_domain):
    return SwirlColumnField(tall_domain, UniformFlux(2.0), LinearSwirl(1.0))


@pytest.fixture(scope="session")
def column_oscillating(tall_domain):
    return SwirlColumnField(tall_domain, OscillatingFlux(1.0, 2.0), LinearSwirl(1.0))


@pytest.fixture(scope="session")
def column_powerlaw(tall_domain):
    return SwirlColumnField(tall_domain, PowerLawFlux(1.0), LinearSwirl(1.0))


@pytest.fixture(scope="session")
def axial_uniform(tall_domain):
    return UniformAxialField(tall_domain, UniformFlux(2.0))


@pytest.fixture(scope="session")
def axial_powerlaw(tall_domain):
    return UniformAxialField(tall_domain, PowerLawFlux(1.0))


@pytest.fixture(scope="session")
def bump_domain():
    return CylinderDomain(r_max=1.0, z_min=0.0, z_max=3.0, t_max=1.0)


@pytest.fixture(scope="session")
def bump_field(bump_domain):
    """Divergence-free stream-function fixture with uniform inlet."""
    return StreamFunctionField(bump_domain, UniformFlux(2.0), amplitude=0.08,
                               z_center=1.5, z_decay=2.0, amp_mode="constant")


@pytest.fixture(scope="session")
def bump_field_oscillating(bump_domain):
    """Flux-modulated bump driven by the oscillating through-flow."""
    return StreamFunctionField(bump_domain, OscillatingFlux(1.0, 2.0),
                               amplitude=0.05, z_center=1.5, z_decay=2.0,
                               amp_mode="flux")


@pytest.fixture(scope="session")
def oscillating_window():
    from helixwarp.flux import find_flux_windows
    return find_flux_windows(OscillatingFlux(1.0, 2.0), 0.1, 200_000)


def max_abs(x):
    return float(np.max(np.abs(np.asarray(x))))
