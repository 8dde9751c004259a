"""Axisymmetric velocity fields on a truncated cylinder, with analytic jets.

Every catalog field returns its components (v_r, v_theta, v_z) together with
all first and second partial derivatives in (r, z, t), in closed form. The
catalog:

* ``UniformAxialField`` -- v = (0, 0, g(t)); exact solution with p = -g'(t) z.
* ``SwirlColumnField`` -- v = (0, W(r), g(t)); exact solution with
  p = P(r) - g'(t) z where P'(r) = W(r)^2 / r.
* ``StreamFunctionField`` -- divergence-free by construction from
  psi(r, z, t) = g(t) r^2/2 + A(t) phi(r) chi(z) with
  phi(r) = r^2 (r_max^2 - r^2)^2 and chi a Gaussian bump in z shifted to
  vanish at the inlet plane, so v_r(r_max) = 0 and the inlet axial velocity
  is exactly g(t). Not an exact solution; serves as the divergence-free
  test fixture and negative control.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import AxisTouchError, ConfigError, DomainError
from .flux import FluxProfile, flux_from_config


@dataclass(frozen=True)
class CylinderDomain:
    """Truncated cylinder 0 <= r <= r_max, z_min <= z <= z_max, 0 <= t < t_max.

    The inlet reference plane is z = z_min.
    """

    r_max: float = 1.0
    z_min: float = 0.0
    z_max: float = 4.0
    t_max: float = 1.0

    def __post_init__(self):
        if self.r_max <= 0:
            raise ValueError("r_max must be positive")
        if self.z_min >= self.z_max:
            raise ValueError("z_min must be below z_max")
        if not 0.0 < self.t_max <= 1.0:
            raise ValueError("t_max must lie in (0, 1]")

    def check_point(self, r: float, z: float, t: float) -> None:
        if not 0.0 <= r <= self.r_max:
            raise DomainError(f"r={r} outside [0, {self.r_max}]")
        if not self.z_min <= z <= self.z_max:
            raise DomainError(f"z={z} outside [{self.z_min}, {self.z_max}]")
        if not 0.0 <= t < self.t_max:
            raise DomainError(f"t={t} outside [0, {self.t_max})")


@dataclass(frozen=True)
class ComponentJet:
    """One velocity component with its first/second (r, z, t) partials."""

    val: float
    dr: float = 0.0
    dz: float = 0.0
    dt: float = 0.0
    drr: float = 0.0
    drz: float = 0.0
    drt: float = 0.0
    dzz: float = 0.0
    dzt: float = 0.0
    dtt: float = 0.0


@dataclass(frozen=True)
class FieldJet:
    vr: ComponentJet
    vtheta: ComponentJet
    vz: ComponentJet

    @property
    def speed(self) -> float:
        return math.hypot(self.vr.val, self.vtheta.val, self.vz.val)


# ---------------------------------------------------------------------------
# swirl profiles W(r) (vanish at r = 0, finite W/r there)
# ---------------------------------------------------------------------------

class RadialProfile:
    """Azimuthal profile W(r) with derivatives and the integral of W^2/r."""

    def w(self, r: float) -> float:
        raise NotImplementedError

    def dw(self, r: float) -> float:
        raise NotImplementedError

    def d2w(self, r: float) -> float:
        raise NotImplementedError

    def w2_over_r(self, r: float) -> float:
        """W(r)^2 / r with its r -> 0 limit (zero for the catalog)."""
        raise NotImplementedError

    def pressure_integral(self, r: float) -> float:
        """P(r) with P' = W^2/r and P(0) = 0."""
        raise NotImplementedError


@dataclass(frozen=True)
class LinearSwirl(RadialProfile):
    """Rigid rotation W(r) = slope * r."""

    slope: float = 1.0

    def w(self, r):
        return self.slope * r

    def dw(self, r):
        return self.slope

    def d2w(self, r):
        return 0.0

    def w2_over_r(self, r):
        return self.slope**2 * r

    def pressure_integral(self, r):
        return 0.5 * self.slope**2 * r**2


@dataclass(frozen=True)
class GaussianSwirl(RadialProfile):
    """W(r) = amp * r * exp(-width * r^2)."""

    amp: float = 1.0
    width: float = 1.0

    def w(self, r):
        return self.amp * r * math.exp(-self.width * r**2)

    def dw(self, r):
        return self.amp * math.exp(-self.width * r**2) * (1.0 - 2.0 * self.width * r**2)

    def d2w(self, r):
        w = self.width
        return self.amp * math.exp(-w * r**2) * (4.0 * w**2 * r**3 - 6.0 * w * r)

    def w2_over_r(self, r):
        return self.amp**2 * r * math.exp(-2.0 * self.width * r**2)

    def pressure_integral(self, r):
        w = self.width
        return self.amp**2 / (4.0 * w) * (1.0 - math.exp(-2.0 * w * r**2))


# ---------------------------------------------------------------------------
# pressure maps for the exact solutions
# ---------------------------------------------------------------------------

class PressureMap:
    def value(self, r: float, z: float, t: float) -> float:
        raise NotImplementedError

    def d_r(self, r: float, z: float, t: float) -> float:
        raise NotImplementedError

    def d_z(self, r: float, z: float, t: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class AxialGradientPressure(PressureMap):
    """p = -g'(t) z, balancing d_t v_z for a purely axial column."""

    flux: FluxProfile

    def value(self, r, z, t):
        return -float(self.flux.d1(t)) * z

    def d_r(self, r, z, t):
        return 0.0

    def d_z(self, r, z, t):
        return -float(self.flux.d1(t))


@dataclass(frozen=True)
class ColumnPressure(PressureMap):
    """p = P(r) - g'(t) z with P' = W^2/r (centripetal balance)."""

    swirl: RadialProfile
    flux: FluxProfile

    def value(self, r, z, t):
        return self.swirl.pressure_integral(r) - float(self.flux.d1(t)) * z

    def d_r(self, r, z, t):
        return self.swirl.w2_over_r(r)

    def d_z(self, r, z, t):
        return -float(self.flux.d1(t))


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class AxisymmetricField:
    """Base class: immutable, pure evaluation, analytic jets."""

    domain: CylinderDomain
    flux: FluxProfile

    def velocity(self, r: float, z: float, t: float) -> tuple[float, float, float]:
        j = self.jet(r, z, t)
        return j.vr.val, j.vtheta.val, j.vz.val

    def jet(self, r: float, z: float, t: float) -> FieldJet:
        raise NotImplementedError

    def exact_pressure(self) -> PressureMap | None:
        return None

    def inlet_axial(self, t: float) -> float:
        """Axial velocity on the inlet plane z = z_min (uniform for the catalog)."""
        return float(self.flux.value(t))


@dataclass(frozen=True)
class UniformAxialField(AxisymmetricField):
    domain: CylinderDomain
    flux: FluxProfile

    def velocity(self, r, z, t):
        return 0.0, 0.0, float(self.flux.value(t))

    def jet(self, r, z, t):
        g, g1, g2 = (float(self.flux.value(t)), float(self.flux.d1(t)),
                     float(self.flux.d2(t)))
        zero = ComponentJet(0.0)
        return FieldJet(vr=zero, vtheta=zero,
                        vz=ComponentJet(val=g, dt=g1, dtt=g2))

    def exact_pressure(self):
        return AxialGradientPressure(self.flux)


@dataclass(frozen=True)
class SwirlColumnField(AxisymmetricField):
    """Swirling column v = (0, W(r), g(t)) -- the exact-identity oracle."""

    domain: CylinderDomain
    flux: FluxProfile
    swirl: RadialProfile

    def velocity(self, r, z, t):
        return 0.0, self.swirl.w(r), float(self.flux.value(t))

    def jet(self, r, z, t):
        g, g1, g2 = (float(self.flux.value(t)), float(self.flux.d1(t)),
                     float(self.flux.d2(t)))
        zero = ComponentJet(0.0)
        vtheta = ComponentJet(val=self.swirl.w(r), dr=self.swirl.dw(r),
                              drr=self.swirl.d2w(r))
        return FieldJet(vr=zero, vtheta=vtheta,
                        vz=ComponentJet(val=g, dt=g1, dtt=g2))

    def exact_pressure(self):
        return ColumnPressure(self.swirl, self.flux)

    def angular_rate(self, r0: float) -> float:
        """W(r0)/r0, the constant angular velocity of the trajectory at r0."""
        if r0 <= 0:
            raise DomainError("angular rate undefined on the axis")
        return self.swirl.w(r0) / r0


@dataclass(frozen=True)
class StreamFunctionField(AxisymmetricField):
    """Divergence-free bump field from an explicit stream function.

    amp_mode "constant" keeps the bump amplitude fixed; "flux" scales it with
    g(t) so time derivatives inherit the through-flow's oscillation.
    """

    domain: CylinderDomain
    flux: FluxProfile
    amplitude: float = 0.08
    z_center: float | None = None
    z_decay: float = 2.0
    amp_mode: str = "constant"
    swirl: RadialProfile | None = None

    def __post_init__(self):
        if self.amp_mode not in ("constant", "flux"):
            raise ValueError("amp_mode must be 'constant' or 'flux'")
        if self.z_center is None:
            object.__setattr__(self, "z_center",
                               0.5 * (self.domain.z_min + self.domain.z_max))

    # -- scalar building blocks ------------------------------------------
    def _amp(self, t: float) -> tuple[float, float, float]:
        if self.amp_mode == "constant":
            return self.amplitude, 0.0, 0.0
        return (self.amplitude * float(self.flux.value(t)),
                self.amplitude * float(self.flux.d1(t)),
                self.amplitude * float(self.flux.d2(t)))

    def _chi(self, z: float) -> tuple[float, float, float, float]:
        c = self.z_decay
        u = z - self.z_center
        e = math.exp(-c * u**2)
        chi0 = math.exp(-c * (self.domain.z_min - self.z_center) ** 2)
        return (e - chi0,
                -2.0 * c * u * e,
                (4.0 * c**2 * u**2 - 2.0 * c) * e,
                (12.0 * c**2 * u - 8.0 * c**3 * u**3) * e)

    def _radial(self, r: float) -> tuple[float, float, float, float, float, float]:
        """Phi = phi/r, Psi = phi'/r and their r-derivatives."""
        m = self.domain.r_max**2
        phi_r = r * (m - r**2) ** 2                     # phi/r
        dphi_r = (m - r**2) * (m - 5.0 * r**2)
        d2phi_r = -4.0 * r * (3.0 * m - 5.0 * r**2)
        psi_r = 2.0 * (m - r**2) * (m - 3.0 * r**2)     # phi'/r
        dpsi_r = -16.0 * m * r + 24.0 * r**3
        d2psi_r = -16.0 * m + 72.0 * r**2
        return phi_r, dphi_r, d2phi_r, psi_r, dpsi_r, d2psi_r

    def stream_function(self, r: float, z: float, t: float) -> float:
        a, _, _ = self._amp(t)
        chi, _, _, _ = self._chi(z)
        m = self.domain.r_max**2
        return float(self.flux.value(t)) * r**2 / 2.0 + a * r**2 * (m - r**2) ** 2 * chi

    def jet(self, r, z, t):
        g, g1, g2 = (float(self.flux.value(t)), float(self.flux.d1(t)),
                     float(self.flux.d2(t)))
        a, a1, a2 = self._amp(t)
        chi, chi1, chi2, chi3 = self._chi(z)
        big_phi, dphi, d2phi, big_psi, dpsi, d2psi = self._radial(r)

        vr = ComponentJet(
            val=-a * big_phi * chi1,
            dr=-a * dphi * chi1, dz=-a * big_phi * chi2, dt=-a1 * big_phi * chi1,
            drr=-a * d2phi * chi1, drz=-a * dphi * chi2, drt=-a1 * dphi * chi1,
            dzz=-a * big_phi * chi3, dzt=-a1 * big_phi * chi2,
            dtt=-a2 * big_phi * chi1)
        vz = ComponentJet(
            val=g + a * big_psi * chi,
            dr=a * dpsi * chi, dz=a * big_psi * chi1, dt=g1 + a1 * big_psi * chi,
            drr=a * d2psi * chi, drz=a * dpsi * chi1, drt=a1 * dpsi * chi,
            dzz=a * big_psi * chi2, dzt=a1 * big_psi * chi1,
            dtt=g2 + a2 * big_psi * chi)
        if self.swirl is None:
            vtheta = ComponentJet(0.0)
        else:
            vtheta = ComponentJet(val=self.swirl.w(r), dr=self.swirl.dw(r),
                                  drr=self.swirl.d2w(r))
        return FieldJet(vr=vr, vtheta=vtheta, vz=vz)


# ---------------------------------------------------------------------------
# point diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldResidual:
    divergence: float
    euler_r: float
    euler_theta: float
    euler_z: float

    @property
    def max_abs(self) -> float:
        return max(abs(self.divergence), abs(self.euler_r),
                   abs(self.euler_theta), abs(self.euler_z))


def eval_field(field: AxisymmetricField, r: float, z: float, t: float) -> FieldJet:
    """Domain-checked jet evaluation; at r = 0 the catalog gives v_r = v_theta = 0."""
    field.domain.check_point(r, z, t)
    return field.jet(r, z, t)


def divergence_residual(field: AxisymmetricField, r: float, z: float, t: float) -> float:
    """d_r(r v_r)/r + d_z v_z, with the limit form 2 d_r v_r + d_z v_z on the axis."""
    j = eval_field(field, r, z, t)
    if r == 0.0:
        return 2.0 * j.vr.dr + j.vz.dz
    return j.vr.dr + j.vr.val / r + j.vz.dz


def euler_residual(field: AxisymmetricField, pressure: PressureMap | None,
                   r: float, z: float, t: float) -> FieldResidual:
    """Pointwise residuals of the axisymmetric momentum and continuity equations."""
    if pressure is None:
        raise ConfigError("euler_residual needs a pressure map")
    if r <= 0.0:
        raise DomainError("euler_residual needs an interior point r > 0")
    j = eval_field(field, r, z, t)
    vr, vth, vz = j.vr, j.vtheta, j.vz
    res_r = (vr.dt + vr.val * vr.dr + vz.val * vr.dz
             - vth.val**2 / r + pressure.d_r(r, z, t))
    res_th = (vth.dt + vr.val * vth.dr + vz.val * vth.dz
              + vr.val * vth.val / r)
    res_z = (vz.dt + vr.val * vz.dr + vz.val * vz.dz + pressure.d_z(r, z, t))
    return FieldResidual(divergence=divergence_residual(field, r, z, t),
                         euler_r=res_r, euler_theta=res_th, euler_z=res_z)


def swirl_transport_residual(field: AxisymmetricField, curve) -> float:
    """Max deviation of v_theta along a trajectory from its transported value.

    The transported value is v_theta(seed) * exp(-int v_r/R dtau), integrated
    by the trapezoid rule over the curve samples. Exact Euler solutions give
    zero up to quadrature error.
    """
    if curve.status == "axis-touch":
        raise AxisTouchError("trajectory touched the axis; transport integral singular")
    ratio = curve.vr / curve.r
    integral = np.concatenate([[0.0], cumulative_trapezoid(ratio, curve.t)])
    vtheta0 = curve.vtheta[0]
    predicted = vtheta0 * np.exp(-integral)
    return float(np.max(np.abs(curve.vtheta - predicted)))


def axial_velocity_floor(field: AxisymmetricField, t_values, n_r: int = 12,
                         n_z: int = 12) -> float:
    """Minimum of v_z over an (r, z) lattice at the given times."""
    dom = field.domain
    rs = np.linspace(0.0, dom.r_max, n_r)
    zs = np.linspace(dom.z_min, dom.z_max, n_z)
    floor = math.inf
    for t in np.atleast_1d(t_values):
        for r in rs:
            for z in zs:
                floor = min(floor, field.velocity(float(r), float(z), float(t))[2])
    return floor


# ---------------------------------------------------------------------------
# config factory
# ---------------------------------------------------------------------------

def swirl_from_config(spec: dict | None) -> RadialProfile | None:
    if spec is None:
        return None
    kind = spec.get("kind")
    if kind == "linear":
        return LinearSwirl(slope=float(spec.get("slope", 1.0)))
    if kind == "gaussian":
        return GaussianSwirl(amp=float(spec.get("amp", 1.0)),
                             width=float(spec.get("width", 1.0)))
    raise ConfigError(f"unknown swirl kind: {kind!r}")


def field_from_config(spec: dict, domain: CylinderDomain,
                      flux: FluxProfile | None = None) -> AxisymmetricField:
    kind = spec.get("kind")
    if flux is None:
        flux = flux_from_config(spec.get("flux", {"kind": "uniform", "value": 2.0}))
    if kind == "uniform_axial":
        return UniformAxialField(domain=domain, flux=flux)
    if kind == "swirl_column":
        swirl = swirl_from_config(spec.get("swirl", {"kind": "linear", "slope": 1.0}))
        return SwirlColumnField(domain=domain, flux=flux, swirl=swirl)
    if kind == "stream_function":
        return StreamFunctionField(
            domain=domain, flux=flux,
            amplitude=float(spec.get("amplitude", 0.08)),
            z_center=spec.get("z_center"),
            z_decay=float(spec.get("z_decay", 2.0)),
            amp_mode=spec.get("amp_mode", "constant"),
            swirl=swirl_from_config(spec.get("swirl")))
    raise ConfigError(f"unknown field kind: {kind!r}")
