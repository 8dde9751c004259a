"""Particle trajectories, reparameterizations, and the 2D deformation matrix.

Trajectories solve dR/dt = v_r, R dTheta/dt = v_theta, dZ/dt = v_z with an
adaptive 4th/5th-order pair (scipy RK45) and carry the integrator's dense
interpolant, which every reparameterization samples instead of re-integrating.
Theta accumulates without wrapping so its z-derivatives stay smooth.

Reaching the axis guard or leaving the axial extent are reported outcomes:
the partial curve comes back flagged, not raised.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import DomainError, StagnationError, UnilateralViolationError
from .field import AxisymmetricField, FieldJet

#: fraction of r_max below which a trajectory counts as touching the axis
AXIS_GUARD_FRACTION = 1e-6


class CurveParam(enum.Enum):
    TIME = "time"
    AXIS_LENGTH = "axis_length"
    ARC_LENGTH = "arc_length"


@dataclass(frozen=True)
class Seed:
    r0: float
    theta0: float = 0.0
    z0: float = 0.0
    t0: float = 0.0


@dataclass(frozen=True)
class CurveSample:
    t: float
    r: float
    theta: float
    z: float
    vr: float
    vtheta: float
    vz: float
    speed: float


@dataclass
class Curve:
    """Sampled curve with a parameterization tag.

    ``grid`` holds the active parameter (t, z, or s depending on ``param``);
    the remaining arrays are aligned with it.
    """

    param: CurveParam
    grid: np.ndarray
    t: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    z: np.ndarray
    vr: np.ndarray
    vtheta: np.ndarray
    vz: np.ndarray
    speed: np.ndarray
    seed: Seed
    status: str = "completed"
    # axis-length parameterization: t(z) derivatives from 1/v_z and the
    # total z-derivative of v_z along the curve
    t_of_z_d1: np.ndarray | None = None
    t_of_z_d2: np.ndarray | None = None
    dense: object = dc_field(default=None, repr=False)
    dense_layout: str = dc_field(default="", repr=False)

    def __len__(self) -> int:
        return self.grid.size

    def sample(self, i: int) -> CurveSample:
        return CurveSample(t=float(self.t[i]), r=float(self.r[i]),
                           theta=float(self.theta[i]), z=float(self.z[i]),
                           vr=float(self.vr[i]), vtheta=float(self.vtheta[i]),
                           vz=float(self.vz[i]), speed=float(self.speed[i]))

    def positions(self) -> np.ndarray:
        """Cartesian sample positions, shape (n, 3)."""
        return np.column_stack([self.r * np.cos(self.theta),
                                self.r * np.sin(self.theta),
                                self.z])

    def csv_rows(self):
        for i in range(len(self)):
            yield [float(self.grid[i]), float(self.t[i]), float(self.r[i]),
                   float(self.theta[i]), float(self.z[i]), float(self.vr[i]),
                   float(self.vtheta[i]), float(self.vz[i]), float(self.speed[i])]

    def to_dict(self) -> dict:
        return {
            "param": self.param.value,
            "seed": [self.seed.r0, self.seed.theta0, self.seed.z0, self.seed.t0],
            "status": self.status,
            "columns": CSV_COLUMNS,
            "rows": [row for row in self.csv_rows()],
        }


CSV_COLUMNS = ["param", "t", "r", "theta", "z", "vr", "vtheta", "vz", "speed"]


def _axis_guard(field: AxisymmetricField, override: float | None) -> float:
    return AXIS_GUARD_FRACTION * field.domain.r_max if override is None else override


def _events(field: AxisymmetricField, guard: float, z_index: int, r_index: int = 0):
    dom = field.domain

    def ev_axis(t, y):
        return y[r_index] - guard

    def ev_zlo(t, y):
        return y[z_index] - dom.z_min

    def ev_zhi(t, y):
        return y[z_index] - dom.z_max

    ev_axis.terminal = True
    ev_axis.direction = -1
    ev_zlo.terminal = True
    ev_zlo.direction = -1
    ev_zhi.terminal = True
    ev_zhi.direction = 1
    return [ev_axis, ev_zlo, ev_zhi]


def _status_from(sol) -> str:
    if sol.status != 1:
        return "completed"
    if sol.t_events[0].size:
        return "axis-touch"
    return "domain-exit"


def _check_seed(field: AxisymmetricField, seed: Seed, t_end: float, guard: float):
    dom = field.domain
    dom.check_point(seed.r0, seed.z0, seed.t0)
    if t_end > dom.t_max or t_end >= 1.0:
        raise DomainError(f"t_end={t_end} beyond the field's time horizon")
    if t_end <= seed.t0:
        raise DomainError("t_end must exceed the seed time")


def integrate_time(field: AxisymmetricField, seed: Seed, t_end: float,
                   tol: float = 1e-10, n_samples: int = 200,
                   axis_guard: float | None = None) -> Curve:
    """Integrate the full trajectory (R, Theta, Z) plus running arc length."""
    guard = _axis_guard(field, axis_guard)
    _check_seed(field, seed, t_end, guard)
    if seed.r0 <= guard:
        return _degenerate_curve(field, seed, "axis-touch")

    def rhs(t, y):
        r, _, z, _ = y
        vr, vth, vz = field.velocity(r, z, t)
        return [vr, vth / r, vz, math.hypot(vr, vth, vz)]

    sol = solve_ivp(rhs, (seed.t0, t_end),
                    [seed.r0, seed.theta0, seed.z0, 0.0],
                    method="RK45", rtol=tol, atol=tol, dense_output=True,
                    events=_events(field, guard, z_index=2))
    return _sample_time_curve(field, seed, sol, n_samples, layout="rthzs")


def integrate_2d(field: AxisymmetricField, seed: Seed, t_end: float,
                 tol: float = 1e-10, n_samples: int = 200,
                 axis_guard: float | None = None) -> Curve:
    """Integrate only (R, Z); theta is reported frozen at the seed angle."""
    guard = _axis_guard(field, axis_guard)
    _check_seed(field, seed, t_end, guard)
    if seed.r0 <= guard:
        return _degenerate_curve(field, seed, "axis-touch")

    def rhs(t, y):
        vr, _, vz = field.velocity(y[0], y[1], t)
        return [vr, vz]

    sol = solve_ivp(rhs, (seed.t0, t_end), [seed.r0, seed.z0],
                    method="RK45", rtol=tol, atol=tol, dense_output=True,
                    events=_events(field, guard, z_index=1))
    return _sample_time_curve(field, seed, sol, n_samples, layout="rz")


def _degenerate_curve(field: AxisymmetricField, seed: Seed, status: str) -> Curve:
    vr, vth, vz = field.velocity(seed.r0, seed.z0, seed.t0)
    one = lambda x: np.array([x], dtype=float)
    return Curve(param=CurveParam.TIME, grid=one(seed.t0), t=one(seed.t0),
                 r=one(seed.r0), theta=one(seed.theta0), z=one(seed.z0),
                 vr=one(vr), vtheta=one(vth), vz=one(vz),
                 speed=one(math.hypot(vr, vth, vz)), seed=seed, status=status)


def _sample_time_curve(field: AxisymmetricField, seed: Seed, sol,
                       n_samples: int, layout: str) -> Curve:
    t_grid = np.linspace(seed.t0, sol.t[-1], n_samples)
    states = sol.sol(t_grid)
    if layout == "rthzs":
        r, theta, z = states[0], states[1], states[2]
    else:
        r, z = states[0], states[1]
        theta = np.full_like(r, seed.theta0)
    vr = np.empty_like(r)
    vth = np.empty_like(r)
    vz = np.empty_like(r)
    for i in range(t_grid.size):
        vr[i], vth[i], vz[i] = field.velocity(float(r[i]), float(z[i]),
                                              float(t_grid[i]))
    return Curve(param=CurveParam.TIME, grid=t_grid, t=t_grid, r=r,
                 theta=theta, z=z, vr=vr, vtheta=vth, vz=vz,
                 speed=np.sqrt(vr**2 + vth**2 + vz**2), seed=seed,
                 status=_status_from(sol), dense=sol.sol, dense_layout=layout)


# ---------------------------------------------------------------------------
# total derivatives along the z-parameterized trajectory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxisRates:
    """d/dz and d^2/dz^2 of trajectory quantities at a matched (r, z, t) point.

    Derivatives are total along the z-parameterized trajectory: for any
    component F(r, z, t), dF/dz = F_r r' + F_z + F_t t' with r' = v_r/v_z
    and t' = 1/v_z, and similarly for the second derivative. t2 below is the
    second z-derivative of the inverse time map t(z).
    """

    jet: FieldJet
    r1: float
    t1: float
    r2: float
    t2: float
    d_vr: float
    d_vtheta: float
    d_vz: float
    d2_vr: float
    d2_vtheta: float
    d2_vz: float


def axis_length_rates(field: AxisymmetricField, r: float, z: float, t: float) -> AxisRates:
    jet = field.jet(r, z, t)
    vz = jet.vz.val
    if vz <= 0.0:
        raise UnilateralViolationError(f"v_z={vz} <= 0 at (r={r}, z={z}, t={t})")
    vr = jet.vr.val
    r1 = vr / vz
    t1 = 1.0 / vz

    def total1(c):
        return c.dr * r1 + c.dz + c.dt * t1

    d_vr, d_vth, d_vz = (total1(jet.vr), total1(jet.vtheta), total1(jet.vz))
    t2 = -d_vz / vz**2
    r2 = (d_vr * vz - vr * d_vz) / vz**2

    def total2(c, d1c):
        return ((c.drr * r1 + c.drz + c.drt * t1) * r1 + c.dr * r2
                + (c.drz * r1 + c.dzz + c.dzt * t1)
                + (c.drt * r1 + c.dzt + c.dtt * t1) * t1 + c.dt * t2)

    return AxisRates(jet=jet, r1=r1, t1=t1, r2=r2, t2=t2,
                     d_vr=d_vr, d_vtheta=d_vth, d_vz=d_vz,
                     d2_vr=total2(jet.vr, d_vr),
                     d2_vtheta=total2(jet.vtheta, d_vth),
                     d2_vz=total2(jet.vz, d_vz))


# ---------------------------------------------------------------------------
# reparameterizations (sample the dense interpolant, never re-integrate)
# ---------------------------------------------------------------------------

def _require_dense(curve: Curve, op: str) -> None:
    if curve.param is not CurveParam.TIME or curve.dense is None:
        raise DomainError(f"{op} needs a time-parameterized curve with dense output")


def _invert_monotone(dense, index: int, targets: np.ndarray,
                     t_lo: float, t_hi: float) -> np.ndarray:
    """Solve dense(t)[index] = target for each target on [t_lo, t_hi]."""
    out = np.empty_like(targets)
    lo_val = float(dense(t_lo)[index])
    hi_val = float(dense(t_hi)[index])
    span = abs(hi_val - lo_val)
    for k, target in enumerate(targets):
        if abs(target - lo_val) <= 1e-13 * span:
            out[k] = t_lo
        elif abs(target - hi_val) <= 1e-13 * span:
            out[k] = t_hi
        else:
            out[k] = brentq(lambda tt: dense(tt)[index] - target, t_lo, t_hi,
                            xtol=1e-14, rtol=8.9e-16)
    return out


def reparam_axis_length(curve: Curve, field: AxisymmetricField,
                        n_samples: int | None = None,
                        z_span: tuple[float, float] | None = None) -> Curve:
    """Resample a trajectory on a uniform z-grid via the inverse time map t(z).

    Stores dt/dz = 1/v_z and d^2t/dz^2 = -(dv_z/dz)/v_z^2 with dv_z/dz the
    total derivative along the curve (for a pure column this reduces to
    -g'/g^3 at matched times). ``z_span`` restricts the resampled range.
    """
    _require_dense(curve, "axis-length reparameterization")
    if np.any(curve.vz <= 0.0) or np.any(np.diff(curve.z) <= 0.0):
        raise UnilateralViolationError("Z(t) is not strictly increasing")
    n = n_samples or len(curve)
    if z_span is None:
        z_span = (float(curve.z[0]), float(curve.z[-1]))
    elif not curve.z[0] <= z_span[0] < z_span[1] <= curve.z[-1]:
        raise DomainError(f"z_span {z_span} outside the curve's axial range")
    z_grid = np.linspace(z_span[0], z_span[1], n)
    z_index = 2 if curve.dense_layout == "rthzs" else 1
    t_arr = _invert_monotone(curve.dense, z_index, z_grid,
                             float(curve.t[0]), float(curve.t[-1]))

    states = curve.dense(t_arr)
    if curve.dense_layout == "rthzs":
        r, theta = states[0], states[1]
    else:
        r, theta = states[0], np.full(n, curve.seed.theta0)
    vr = np.empty(n)
    vth = np.empty(n)
    vz = np.empty(n)
    d1 = np.empty(n)
    d2 = np.empty(n)
    for i in range(n):
        rates = axis_length_rates(field, float(r[i]), float(z_grid[i]), float(t_arr[i]))
        vr[i], vth[i], vz[i] = (rates.jet.vr.val, rates.jet.vtheta.val,
                                rates.jet.vz.val)
        d1[i], d2[i] = rates.t1, rates.t2
    return Curve(param=CurveParam.AXIS_LENGTH, grid=z_grid, t=t_arr, r=r,
                 theta=theta, z=z_grid, vr=vr, vtheta=vth, vz=vz,
                 speed=np.sqrt(vr**2 + vth**2 + vz**2), seed=curve.seed,
                 status=curve.status, t_of_z_d1=d1, t_of_z_d2=d2)


def reparam_arc_length(curve: Curve, field: AxisymmetricField,
                       n_samples: int | None = None) -> Curve:
    """Resample on a uniform arc-length grid, s(t) = int |u| dt.

    The arc length rides along as an extra integrated state, so s(t) carries
    the integrator's own order; the inverse s -> t is root-found on the dense
    interpolant.
    """
    _require_dense(curve, "arc-length reparameterization")
    if curve.dense_layout != "rthzs":
        raise DomainError("arc-length reparameterization needs the full 3D trajectory")
    if np.any(curve.speed <= 0.0):
        raise StagnationError("speed vanished along the curve")
    n = n_samples or len(curve)
    s_total = float(curve.dense(curve.t[-1])[3])
    s_grid = np.linspace(0.0, s_total, n)
    t_arr = _invert_monotone(curve.dense, 3, s_grid,
                             float(curve.t[0]), float(curve.t[-1]))
    states = curve.dense(t_arr)
    r, theta, z = states[0], states[1], states[2]
    vr = np.empty(n)
    vth = np.empty(n)
    vz = np.empty(n)
    for i in range(n):
        vr[i], vth[i], vz[i] = field.velocity(float(r[i]), float(z[i]), float(t_arr[i]))
    return Curve(param=CurveParam.ARC_LENGTH, grid=s_grid, t=t_arr, r=r,
                 theta=theta, z=z, vr=vr, vtheta=vth, vz=vz,
                 speed=np.sqrt(vr**2 + vth**2 + vz**2), seed=curve.seed,
                 status=curve.status)


# ---------------------------------------------------------------------------
# 2D Lagrangian deformation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Deformation2D:
    """Sensitivities of (R, Z) to the seed (r0, z0) at one time."""

    dR_dr0: float
    dR_dz0: float
    dZ_dr0: float
    dZ_dz0: float

    @property
    def det(self) -> float:
        return self.dR_dr0 * self.dZ_dz0 - self.dR_dz0 * self.dZ_dr0


@dataclass
class Deformation2DSeries:
    t: np.ndarray
    entries: np.ndarray          # shape (n, 2, 2): [[dR/dr0, dR/dz0], [dZ/dr0, dZ/dz0]]
    det: np.ndarray
    det_predicted: np.ndarray    # exp(-int v_r / R dtau): the continuity identity
    mode: str
    status: str

    def entry(self, i: int) -> Deformation2D:
        m = self.entries[i]
        return Deformation2D(dR_dr0=float(m[0, 0]), dR_dz0=float(m[0, 1]),
                             dZ_dr0=float(m[1, 0]), dZ_dz0=float(m[1, 1]))

    @property
    def max_identity_error(self) -> float:
        return float(np.max(np.abs(self.det - self.det_predicted)))


def deformation_2d(field: AxisymmetricField, seed: Seed, t_end: float,
                   tol: float = 1e-10, mode: str = "variational",
                   h_seed: float = 1e-5, n_samples: int = 100,
                   axis_guard: float | None = None) -> Deformation2DSeries:
    """Track the 2x2 seed-sensitivity matrix of the (R, Z) flow.

    "variational" integrates the linearized system alongside the trajectory
    using analytic field jets; "fd" differences four seed-perturbed
    trajectories. Both also report exp(-int v_r/R) -- by continuity the two
    determinants must agree.
    """
    guard = _axis_guard(field, axis_guard)
    _check_seed(field, seed, t_end, guard)
    if mode == "variational":
        return _deformation_variational(field, seed, t_end, tol, n_samples, guard)
    if mode == "fd":
        return _deformation_fd(field, seed, t_end, tol, h_seed, n_samples, guard)
    raise ValueError("mode must be 'variational' or 'fd'")


def _deformation_variational(field, seed, t_end, tol, n_samples, guard):
    def rhs(t, y):
        r, z = y[0], y[1]
        jet = field.jet(r, z, t)
        j11, j12 = jet.vr.dr, jet.vr.dz
        j21, j22 = jet.vz.dr, jet.vz.dz
        m11, m12, m21, m22 = y[2], y[3], y[4], y[5]
        return [jet.vr.val, jet.vz.val,
                j11 * m11 + j12 * m21, j11 * m12 + j12 * m22,
                j21 * m11 + j22 * m21, j21 * m12 + j22 * m22,
                jet.vr.val / r]

    sol = solve_ivp(rhs, (seed.t0, t_end),
                    [seed.r0, seed.z0, 1.0, 0.0, 0.0, 1.0, 0.0],
                    method="RK45", rtol=tol, atol=tol, dense_output=True,
                    events=_events(field, guard, z_index=1))
    t_grid = np.linspace(seed.t0, sol.t[-1], n_samples)
    y = sol.sol(t_grid)
    entries = np.stack([np.stack([y[2], y[3]], axis=-1),
                        np.stack([y[4], y[5]], axis=-1)], axis=-2)
    det = y[2] * y[5] - y[3] * y[4]
    return Deformation2DSeries(t=t_grid, entries=entries, det=det,
                               det_predicted=np.exp(-y[6]), mode="variational",
                               status=_status_from(sol))


def _deformation_fd(field, seed, t_end, tol, h, n_samples, guard):
    base = _deformation_variational(field, seed, t_end, tol, n_samples, guard)
    t_grid = base.t

    def path(r0, z0):
        def rhs(t, y):
            vr, _, vz = field.velocity(y[0], y[1], t)
            return [vr, vz]
        sol = solve_ivp(rhs, (seed.t0, t_grid[-1]), [r0, z0], method="RK45",
                        rtol=tol, atol=tol, dense_output=True)
        return sol.sol(t_grid)

    rp = path(seed.r0 + h, seed.z0)
    rm = path(seed.r0 - h, seed.z0)
    zp = path(seed.r0, seed.z0 + h)
    zm = path(seed.r0, seed.z0 - h)
    d_r0 = (rp - rm) / (2.0 * h)
    d_z0 = (zp - zm) / (2.0 * h)
    entries = np.stack([np.stack([d_r0[0], d_z0[0]], axis=-1),
                        np.stack([d_r0[1], d_z0[1]], axis=-1)], axis=-2)
    det = d_r0[0] * d_z0[1] - d_z0[0] * d_r0[1]
    return Deformation2DSeries(t=t_grid, entries=entries, det=det,
                               det_predicted=base.det_predicted, mode="fd",
                               status=base.status)
