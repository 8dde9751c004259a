"""Frozen-time streamlines in z, the radial transport map and its inverse,
the inflow-propagation ratio, and the laminar-profile diagnostic.

All maps are tabulated on uniform (inlet-radius, z) grids; derivatives up to
total order 3 come from 4th-order finite differences on the tables, and the
radial inverse uses monotone (PCHIP) interpolation per z-station.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from ._fd import table_mixed_diff
from .errors import (AxisTouchError, InvertibilityError, PreconditionError,
                     UnilateralViolationError)
from .field import AxisymmetricField
from .trajectory import AXIS_GUARD_FRACTION

#: derivative multi-indices (k_rbar0, k_z) tabulated for the forward map
DERIV_ORDERS = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
                (3, 0), (2, 1), (1, 2), (0, 3))


@dataclass(frozen=True)
class StreamlinePath:
    """One streamline traced at frozen time, sampled on a z-grid."""

    rbar0: float
    t: float
    z: np.ndarray
    rbar: np.ndarray
    thetabar: np.ndarray
    vr: np.ndarray
    vtheta: np.ndarray
    vz: np.ndarray


def trace_streamline(field: AxisymmetricField, rbar0: float, t: float,
                     z_grid: np.ndarray, tol: float = 1e-10,
                     axis_guard: float | None = None) -> StreamlinePath:
    """Integrate dRbardZ = v_r/v_z, Rbar dThetabar/dz = v_theta/v_z at fixed t.

    The tangent has unit axial component by construction. Hitting v_z <= 0 or
    the axis guard aborts the trace with an error (streamlines, unlike
    trajectories, are useless past either event).
    """
    z_grid = np.asarray(z_grid, dtype=float)
    guard = AXIS_GUARD_FRACTION * field.domain.r_max if axis_guard is None else axis_guard
    if not 0.0 < rbar0 < field.domain.r_max:
        raise PreconditionError(f"inlet radius {rbar0} outside (0, r_max)")

    def rhs(z, y):
        vr, vth, vz = field.velocity(y[0], z, t)
        return [vr / vz, vth / (y[0] * vz)]

    def ev_unilateral(z, y):
        return field.velocity(y[0], z, t)[2]

    def ev_axis(z, y):
        return y[0] - guard

    ev_unilateral.terminal = True
    ev_axis.terminal = True
    ev_axis.direction = -1

    sol = solve_ivp(rhs, (z_grid[0], z_grid[-1]), [rbar0, 0.0], method="RK45",
                    rtol=tol, atol=tol, t_eval=z_grid,
                    events=[ev_unilateral, ev_axis])
    if sol.status == 1:
        where = sol.t_events[0][0] if sol.t_events[0].size else sol.t_events[1][0]
        if sol.t_events[0].size:
            raise UnilateralViolationError(
                f"v_z reached zero at z={where} on streamline rbar0={rbar0}")
        raise AxisTouchError(f"streamline rbar0={rbar0} hit the axis at z={where}")
    rbar, thetabar = sol.y[0], sol.y[1]
    vr = np.empty_like(rbar)
    vth = np.empty_like(rbar)
    vz = np.empty_like(rbar)
    for i, z in enumerate(z_grid):
        vr[i], vth[i], vz[i] = field.velocity(float(rbar[i]), float(z), t)
    return StreamlinePath(rbar0=rbar0, t=t, z=z_grid, rbar=rbar,
                          thetabar=thetabar, vr=vr, vtheta=vth, vz=vz)


@dataclass
class StreamlineMap:
    """Radial transport table Rbar(rbar0, z) at frozen t, with derivatives
    up to total order 3 and a monotone inverse per z-station."""

    t: float
    rbar0_grid: np.ndarray
    z_grid: np.ndarray
    rbar: np.ndarray                      # shape (n_r0, n_z)
    derivs: dict[tuple[int, int], np.ndarray]
    inv_r_grid: np.ndarray                # common radii for the inverse table
    inv_table: np.ndarray                 # rbar0 = Rbar^-1(r, z), shape (n_r, n_z)
    inv_derivs: dict[tuple[int, int], np.ndarray]
    _station_inverse: list = dc_field(default_factory=list, repr=False)
    _station_forward: dict = dc_field(default_factory=dict, repr=False)

    def drbar(self, k_r0: int, k_z: int) -> np.ndarray:
        return self.derivs[(k_r0, k_z)]

    def rbar_inv(self, r: float, z_index: int) -> float:
        """Inlet radius of the streamline through radius r at station z_index."""
        return float(self._station_inverse[z_index](r))

    def interp_at(self, key: tuple[int, int], rbar0: float, z_index: int) -> float:
        """Interpolate a forward-derivative table in rbar0 at one z-station."""
        if key not in self._station_forward:
            table = self.derivs[key]
            self._station_forward[key] = [
                PchipInterpolator(self.rbar0_grid, table[:, j])
                for j in range(self.z_grid.size)]
        return float(self._station_forward[key][z_index](rbar0))

    def z_station(self, z: float) -> int:
        j = int(np.argmin(np.abs(self.z_grid - z)))
        if abs(self.z_grid[j] - z) > 1e-9 * max(1.0, abs(z)):
            raise PreconditionError(f"z={z} is not a tabulated station")
        return j


def build_streamline_map(field: AxisymmetricField, t: float,
                         rbar0_grid: np.ndarray, z_grid: np.ndarray,
                         tol: float = 1e-10) -> StreamlineMap:
    """Trace one streamline per inlet radius and tabulate the radial map.

    Raises InvertibilityError (with location) if d_rbar0 Rbar <= 0 anywhere:
    the inverse would not exist there.
    """
    rbar0_grid = np.asarray(rbar0_grid, dtype=float)
    z_grid = np.asarray(z_grid, dtype=float)
    h_r = float(rbar0_grid[1] - rbar0_grid[0])
    h_z = float(z_grid[1] - z_grid[0])

    table = np.empty((rbar0_grid.size, z_grid.size))
    for i, r0 in enumerate(rbar0_grid):
        table[i] = trace_streamline(field, float(r0), t, z_grid, tol=tol).rbar

    derivs = {key: table_mixed_diff(table, h_r, h_z, key[0], key[1])
              for key in DERIV_ORDERS}
    d10 = derivs[(1, 0)]
    if np.any(d10 <= 0.0):
        i, j = np.unravel_index(int(np.argmin(d10)), d10.shape)
        raise InvertibilityError(
            f"d_rbar0 Rbar = {d10[i, j]:.3e} <= 0 at rbar0={rbar0_grid[i]}, "
            f"z={z_grid[j]}")

    station_inverse = [PchipInterpolator(table[:, j], rbar0_grid)
                       for j in range(z_grid.size)]
    r_lo = float(np.max(table[0, :]))
    r_hi = float(np.min(table[-1, :]))
    if r_lo >= r_hi:
        raise InvertibilityError("streamline band collapsed; no common radii")
    inv_r_grid = np.linspace(r_lo, r_hi, rbar0_grid.size)
    inv_table = np.column_stack([station_inverse[j](inv_r_grid)
                                 for j in range(z_grid.size)])
    h_ir = float(inv_r_grid[1] - inv_r_grid[0])
    inv_derivs = {key: table_mixed_diff(inv_table, h_ir, h_z, key[0], key[1])
                  for key in DERIV_ORDERS}
    return StreamlineMap(t=t, rbar0_grid=rbar0_grid, z_grid=z_grid, rbar=table,
                         derivs=derivs, inv_r_grid=inv_r_grid,
                         inv_table=inv_table, inv_derivs=inv_derivs,
                         _station_inverse=station_inverse)


# ---------------------------------------------------------------------------
# inflow propagation
# ---------------------------------------------------------------------------

@dataclass
class InflowPropagation:
    """Area-transport ratio rho = 2 rbar0 / d_rbar0(Rbar^2) with derivatives.

    ``rho_annulus`` cross-validates against the defining annulus-area ratio
    at a finite inlet thickness eps (agreement is O(eps)).
    """

    rbar0_grid: np.ndarray
    z_grid: np.ndarray
    rho: np.ndarray
    d_z: np.ndarray
    d_z2: np.ndarray
    d_r0: np.ndarray
    d_r02: np.ndarray
    eps: float
    rho_annulus: np.ndarray
    _station_rho: list = dc_field(default_factory=list, repr=False)

    def interp_rho(self, rbar0: float, z_index: int) -> float:
        if not self._station_rho:
            self._station_rho.extend(
                PchipInterpolator(self.rbar0_grid, self.rho[:, j])
                for j in range(self.z_grid.size))
        return float(self._station_rho[z_index](rbar0))


def inflow_propagation(field: AxisymmetricField, smap: StreamlineMap,
                       eps: float = 1e-4, tol: float = 1e-10) -> InflowPropagation:
    rho = smap.rbar0_grid[:, None] / (smap.rbar * smap.drbar(1, 0))
    if np.any(rho <= 0.0):
        raise InvertibilityError("inflow propagation non-positive somewhere")
    h_r = float(smap.rbar0_grid[1] - smap.rbar0_grid[0])
    h_z = float(smap.z_grid[1] - smap.z_grid[0])

    annulus = np.full_like(rho, np.nan)
    for i, r0 in enumerate(smap.rbar0_grid):
        outer = float(r0) + eps
        if outer >= field.domain.r_max:
            continue
        shifted = trace_streamline(field, outer, smap.t, smap.z_grid, tol=tol).rbar
        annulus[i] = (outer**2 - r0**2) / (shifted**2 - smap.rbar[i] ** 2)

    return InflowPropagation(
        rbar0_grid=smap.rbar0_grid, z_grid=smap.z_grid, rho=rho,
        d_z=table_mixed_diff(rho, h_r, h_z, 0, 1),
        d_z2=table_mixed_diff(rho, h_r, h_z, 0, 2),
        d_r0=table_mixed_diff(rho, h_r, h_z, 1, 0),
        d_r02=table_mixed_diff(rho, h_r, h_z, 2, 0),
        eps=eps, rho_annulus=annulus)


# ---------------------------------------------------------------------------
# velocity reconstruction from the transport map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReconstructionResiduals:
    probes: tuple[tuple[float, float], ...]
    vz_residual: np.ndarray
    vr_residual: np.ndarray

    @property
    def max_vz(self) -> float:
        return float(np.max(self.vz_residual))

    @property
    def max_vr(self) -> float:
        return float(np.max(self.vr_residual))


def reconstruct_velocity(smap: StreamlineMap, rho: InflowPropagation,
                         field: AxisymmetricField,
                         probes) -> ReconstructionResiduals:
    """Residuals of v_z = rho(Rbar^-1, z) g and v_r = d_z Rbar(Rbar^-1, z) v_z.

    Both identities are exact for divergence-free unilateral fields whose
    inlet axial velocity is uniform; residuals measure only table and
    interpolation error. Probes must sit on tabulated z-stations.
    """
    t = smap.t
    g = field.inlet_axial(t)
    inlet_dev = max(abs(field.velocity(float(r), field.domain.z_min, t)[2] - g)
                    for r in np.linspace(0.0, field.domain.r_max, 17))
    if inlet_dev > 1e-9 * max(1.0, abs(g)):
        raise PreconditionError(
            f"inlet axial velocity not uniform (max deviation {inlet_dev:.3e})")

    vz_res = []
    vr_res = []
    for r, z in probes:
        j = smap.z_station(z)
        r0 = smap.rbar_inv(r, j)
        vr_actual, _, vz_actual = field.velocity(float(r), float(z), t)
        vz_pred = rho.interp_rho(r0, j) * g
        vr_pred = smap.interp_at((0, 1), r0, j) * vz_actual
        vz_res.append(abs(vz_actual - vz_pred))
        vr_res.append(abs(vr_actual - vr_pred))
    return ReconstructionResiduals(probes=tuple((float(r), float(z)) for r, z in probes),
                                   vz_residual=np.array(vz_res),
                                   vr_residual=np.array(vr_res))


# ---------------------------------------------------------------------------
# laminar-profile diagnostic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProfileThresholds:
    """User-facing constants behind the ~1 / bounded-norm verdicts."""

    drbar_lo: float = 0.5
    drbar_hi: float = 2.0
    max_norm: float = 10.0


@dataclass
class ProfileReport:
    t: float
    drbar_band: tuple[float, float]
    forward_norms: dict[int, float]
    inverse_norms: dict[int, float]
    dt_inverse_norm: float | None
    dt_drbar_norm: float | None
    verdict: str
    exceeded: list[str]

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "drbar_band": list(self.drbar_band),
            "forward_norms": {str(k): v for k, v in self.forward_norms.items()},
            "inverse_norms": {str(k): v for k, v in self.inverse_norms.items()},
            "dt_inverse_norm": self.dt_inverse_norm,
            "dt_drbar_norm": self.dt_drbar_norm,
            "verdict": self.verdict,
            "exceeded": self.exceeded,
        }


VERDICT_WITHIN = "uniformly-smooth-within"
VERDICT_EXCEEDED = "bound-exceeded"


def profile_report(field: AxisymmetricField, t_list, rbar0_grid, z_grid,
                   thresholds: ProfileThresholds = ProfileThresholds(),
                   tol: float = 1e-10) -> list[ProfileReport]:
    """Tabulate the smoothness norms of the radial map per time.

    Mixed derivatives of each total order are pooled by max; time derivatives
    are finite differences across adjacent entries of t_list (absent when a
    single time is given).
    """
    t_list = list(t_list)
    maps = [build_streamline_map(field, float(t), rbar0_grid, z_grid, tol=tol)
            for t in t_list]

    dt_inv: list[float | None] = [None] * len(t_list)
    dt_fwd: list[float | None] = [None] * len(t_list)
    if len(t_list) >= 2:
        r_lo = max(float(m.inv_r_grid[0]) for m in maps)
        r_hi = min(float(m.inv_r_grid[-1]) for m in maps)
        shared_r = np.linspace(r_lo, r_hi, rbar0_grid.size)
        inv_stack = np.stack([
            np.column_stack([m._station_inverse[j](shared_r)
                             for j in range(m.z_grid.size)])
            for m in maps])
        fwd_stack = np.stack([m.drbar(1, 0) for m in maps])
        d_inv = np.gradient(inv_stack, np.asarray(t_list, dtype=float), axis=0)
        d_fwd = np.gradient(fwd_stack, np.asarray(t_list, dtype=float), axis=0)
        dt_inv = [float(np.max(np.abs(d_inv[k]))) for k in range(len(t_list))]
        dt_fwd = [float(np.max(np.abs(d_fwd[k]))) for k in range(len(t_list))]

    reports = []
    for k, (t, smap) in enumerate(zip(t_list, maps)):
        d10 = smap.drbar(1, 0)
        band = (float(np.min(d10)), float(np.max(d10)))
        fwd = {ell: max(float(np.max(np.abs(smap.derivs[key])))
                        for key in DERIV_ORDERS if sum(key) == ell)
               for ell in (1, 2, 3)}
        inv = {ell: max(float(np.max(np.abs(smap.inv_derivs[key])))
                        for key in DERIV_ORDERS if sum(key) == ell)
               for ell in (1, 2, 3)}
        exceeded = []
        if not (thresholds.drbar_lo <= band[0] and band[1] <= thresholds.drbar_hi):
            exceeded.append("drbar_band")
        for ell in (1, 2, 3):
            if fwd[ell] > thresholds.max_norm:
                exceeded.append(f"forward_order_{ell}")
            if inv[ell] > thresholds.max_norm:
                exceeded.append(f"inverse_order_{ell}")
        for name, val in (("dt_inverse", dt_inv[k]), ("dt_drbar", dt_fwd[k])):
            if val is not None and val > thresholds.max_norm:
                exceeded.append(name)
        reports.append(ProfileReport(
            t=float(t), drbar_band=band, forward_norms=fwd, inverse_norms=inv,
            dt_inverse_norm=dt_inv[k], dt_drbar_norm=dt_fwd[k],
            verdict=VERDICT_WITHIN if not exceeded else VERDICT_EXCEEDED,
            exceeded=exceeded))
    return reports
