"""Trajectory-attached scaling series and pressure-geometry identity checks.

The central scalar here is the trajectory-attached speed rate: for a point x
at time t, the rate of change of |u| along the unique trajectory passing
through x at t. That equals the material derivative of |u| evaluated at the
point, which is how ``speed_rate`` computes it; ``speed_rate_via_relaunch``
realizes the same number by integrating the trajectory over a short span and
differencing, as an independent cross-check.

Normal-coordinate derivatives of the rate are central differences over
frame-offset points (x +/- h n, x +/- h b) at the frozen probe time, with
optional Richardson extrapolation. The identity checks report residuals under
both sign conventions for the tangential pressure relation; the convention
that the exact solutions select is ``EULER_CONSISTENT``
(d|u|/dt = -grad p . tau).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import EmptyWindowError, PreconditionError, StagnationError
from .field import (AxisymmetricField, PressureMap, SwirlColumnField,
                    UniformAxialField)
from .flux import FluxWindow
from .geometry import FrenetFrame, frenet_analytic_column, frenet_from_curve
from .trajectory import (Curve, Seed, axis_length_rates, integrate_time,
                         reparam_arc_length, reparam_axis_length)


class SignConvention(enum.Enum):
    PAPER_LITERAL = "paper-literal"        # d|u|/dt = +grad p . tau
    EULER_CONSISTENT = "euler-consistent"  # d|u|/dt = -grad p . tau


@dataclass(frozen=True)
class FdSpec:
    """Step control for normal-offset derivatives."""

    h: float = 1e-4
    richardson: bool = True
    stencil_order: int = 2


# ---------------------------------------------------------------------------
# the trajectory-attached speed rate
# ---------------------------------------------------------------------------

def speed_rate(field: AxisymmetricField, r: float, z: float, t: float) -> float:
    """d|u|/dt along the trajectory through (r, z) at time t.

    Equals (sum_i v_i Dv_i)/|u| with Dv_i the 2D material derivatives
    d_t v_i + v_r d_r v_i + v_z d_z v_i; axisymmetry makes the azimuthal
    advection term vanish for the component scalars.
    """
    j = field.jet(r, z, t)
    speed = j.speed
    if speed <= 0.0:
        raise StagnationError(f"zero speed at (r={r}, z={z}, t={t})")
    acc = 0.0
    for c in (j.vr, j.vtheta, j.vz):
        acc += c.val * (c.dt + j.vr.val * c.dr + j.vz.val * c.dz)
    return acc / speed


def speed_rate_via_relaunch(field: AxisymmetricField, r: float, z: float,
                            t: float, dt: float = 1e-6,
                            tol: float = 1e-12) -> float:
    """The same rate, by launching the trajectory through (r, z, t) and
    differencing |u| at t +/- dt. Cross-check for ``speed_rate``."""
    from scipy.integrate import solve_ivp

    def rhs(tt, y):
        vr, _, vz = field.velocity(y[0], y[1], tt)
        return [vr, vz]

    speeds = []
    for direction in (-1.0, 1.0):
        sol = solve_ivp(rhs, (t, t + direction * dt), [r, z], method="RK45",
                        rtol=tol, atol=tol)
        rr, zz = float(sol.y[0, -1]), float(sol.y[1, -1])
        speeds.append(math.hypot(*field.velocity(rr, zz, t + direction * dt)))
    return (speeds[1] - speeds[0]) / (2.0 * dt)


def _rate_at_cartesian(field: AxisymmetricField, x: np.ndarray, t: float) -> float:
    return speed_rate(field, math.hypot(x[0], x[1]), float(x[2]), t)


def offset_rate_derivative(field: AxisymmetricField, x0: np.ndarray,
                           direction: np.ndarray, t: float, h: float,
                           richardson: bool = True) -> float:
    """Central difference of the speed rate along a frame direction at fixed t."""
    def central(step):
        return (_rate_at_cartesian(field, x0 + step * direction, t)
                - _rate_at_cartesian(field, x0 - step * direction, t)) / (2.0 * step)

    d_h = central(h)
    if not richardson:
        return d_h
    return (4.0 * central(h / 2.0) - d_h) / 3.0


# ---------------------------------------------------------------------------
# probe state helpers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeState:
    seed: Seed
    t: float
    r: float
    theta: float
    z: float
    speed: float
    rate: float
    frame: FrenetFrame
    frame_source: str       # "analytic" | "fd" | "degenerate-fallback"

    @property
    def position(self) -> np.ndarray:
        return np.array([self.r * math.cos(self.theta),
                         self.r * math.sin(self.theta), self.z])

    @property
    def e_theta(self) -> np.ndarray:
        return np.array([-math.sin(self.theta), math.cos(self.theta), 0.0])


def _state_at(field: AxisymmetricField, seed: Seed, r: float, theta: float,
              z: float, t: float, tol: float) -> ProbeState:
    if isinstance(field, SwirlColumnField) and field.swirl.w(seed.r0) != 0.0:
        frame = frenet_analytic_column(field, seed, t)
        source = "analytic"
    elif isinstance(field, (UniformAxialField, SwirlColumnField)):
        # straight trajectory: no frame; use radial/azimuthal fallback axes
        e_r = np.array([math.cos(theta), math.sin(theta), 0.0])
        e_th = np.array([-math.sin(theta), math.cos(theta), 0.0])
        frame = FrenetFrame(tau=np.array([0.0, 0.0, 1.0]), n=e_r, b=e_th,
                            kappa=0.0, torsion=0.0, ds_kappa=0.0,
                            degenerate=True)
        source = "degenerate-fallback"
    else:
        margin = min(0.05, 0.5 * (field.domain.t_max - t))
        long_curve = integrate_time(field, seed, t + margin, tol=tol,
                                    n_samples=257)
        arc = reparam_arc_length(long_curve, field)
        frames = frenet_from_curve(arc)
        i = int(np.argmin(np.abs(arc.t - t)))
        frame = frames[i]
        r, theta, z = float(arc.r[i]), float(arc.theta[i]), float(arc.z[i])
        source = "fd"

    sp = math.hypot(*field.velocity(r, z, t))
    return ProbeState(seed=seed, t=t, r=r, theta=theta, z=z, speed=sp,
                      rate=speed_rate(field, r, z, t), frame=frame,
                      frame_source=source)


def _probe_state(field: AxisymmetricField, seed: Seed, t_probe: float,
                 tol: float) -> ProbeState:
    curve = integrate_time(field, seed, t_probe, tol=tol, n_samples=8)
    if curve.status != "completed":
        raise PreconditionError(f"trajectory ended early: {curve.status}")
    return _state_at(field, seed, float(curve.r[-1]), float(curve.theta[-1]),
                     float(curve.z[-1]), t_probe, tol)


def _window_times(window: FluxWindow, n_per_interval: int, t_limit: float,
                  max_total: int = 240) -> np.ndarray:
    """Interior sample times of each window interval, clipped to t_limit.

    Highly oscillating profiles can produce thousands of tiny intervals, so
    the pooled samples are thinned evenly to at most ``max_total``.
    """
    ts = []
    for lo, hi in window.intervals:
        hi = min(hi, t_limit)
        if hi <= lo:
            continue
        pad = 0.05 * (hi - lo)
        ts.append(np.linspace(lo + pad, hi - pad, n_per_interval))
    if not ts:
        raise EmptyWindowError("no window interval reachable before t_limit")
    pooled = np.concatenate(ts)
    if pooled.size > max_total:
        keep = np.linspace(0, pooled.size - 1, max_total).round().astype(int)
        pooled = pooled[np.unique(keep)]
    return pooled


# ---------------------------------------------------------------------------
# scaling series along the trajectory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingEntry:
    name: str
    values: np.ndarray
    reference: np.ndarray
    ratio: np.ndarray
    applicable: bool


@dataclass
class ScalingSeries:
    t: np.ndarray
    z: np.ndarray
    entries: dict[str, ScalingEntry]
    partial: bool = False

    def __getitem__(self, name: str) -> ScalingEntry:
        return self.entries[name]


def scaling_series(field: AxisymmetricField, seed: Seed, window: FluxWindow,
                   n_per_interval: int = 12, tol: float = 1e-10) -> ScalingSeries:
    """Trajectory quantities at window times against their through-flow scalings.

    Every left-hand quantity is evaluated from analytic field jets composed
    with the z-parameterization (total derivatives along the curve); every
    reference comes from the flux profile at the matched time. Ratios are
    reported, not asserted.
    """
    if window.is_empty:
        raise EmptyWindowError("scaling series needs a non-empty window")
    t_hi = max(hi for _, hi in window.intervals)
    curve = integrate_time(field, seed, t_hi, tol=tol, n_samples=64)
    partial = curve.status != "completed"
    times = _window_times(window, n_per_interval, float(curve.t[-1]))

    g = np.array([float(field.flux.value(t)) for t in times])
    g1 = np.array([float(field.flux.d1(t)) for t in times])
    g2 = np.array([float(field.flux.d2(t)) for t in times])

    n = times.size
    z = np.empty(n)
    cols = {name: np.empty(n) for name in
            ("dvz_dz", "d2t_dz2", "d2vz_dz2", "dvr_dz", "d2vr_dz2",
             "vtheta", "dvtheta_dz", "d2vtheta_dz2", "speed_rate")}
    for i, t in enumerate(times):
        state = curve.dense(float(t))
        r, zz = float(state[0]), float(state[2])
        z[i] = zz
        rates = axis_length_rates(field, r, zz, float(t))
        cols["dvz_dz"][i] = rates.d_vz
        cols["d2t_dz2"][i] = rates.t2
        cols["d2vz_dz2"][i] = rates.d2_vz
        cols["dvr_dz"][i] = rates.d_vr
        cols["d2vr_dz2"][i] = rates.d2_vr
        cols["vtheta"][i] = rates.jet.vtheta.val
        cols["dvtheta_dz"][i] = rates.d_vtheta
        cols["d2vtheta_dz2"][i] = rates.d2_vtheta
        cols["speed_rate"][i] = speed_rate(field, r, zz, float(t))

    refs = {
        "dvz_dz": g1 / g,
        "d2t_dz2": -g1 / g**3,
        "d2vz_dz2": g2 / g**2,
        "dvr_dz": g1 / g,
        "d2vr_dz2": g2 / g**2,
        "vtheta": np.ones(n),
        "dvtheta_dz": np.ones(n),
        "d2vtheta_dz2": g1 / g,
        "speed_rate": g1,
    }
    swirl_dependent = {"vtheta", "dvtheta_dz", "d2vtheta_dz2"}
    entries = {}
    for name, values in cols.items():
        ref = refs[name]
        applicable = not (name in swirl_dependent
                          and float(np.max(np.abs(values))) == 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(np.abs(ref) > 0.0, values / ref, np.nan)
        if not applicable:
            ratio = np.full(n, np.nan)
        entries[name] = ScalingEntry(name=name, values=values, reference=ref,
                                     ratio=ratio, applicable=applicable)
    return ScalingSeries(t=times, z=z, entries=entries, partial=partial)


@dataclass
class ThetaScalingSeries:
    t: np.ndarray
    z: np.ndarray
    theta2: np.ndarray
    theta3: np.ndarray
    ref2: np.ndarray
    ref3: np.ndarray
    ratio2: np.ndarray
    ratio3: np.ndarray
    applicable: bool


def theta_scaling_check(field: AxisymmetricField, seed: Seed, window: FluxWindow,
                        n_samples: int = 33, tol: float = 1e-10) -> ThetaScalingSeries:
    """theta''(z), theta'''(z) (finite differences of the z-parameterized angle)
    against the scalings -g'/g^3 and -g''/g^4 at matched times.

    On the pure column theta''/(-g'/g^3) equals W(r0)/r0 identically.
    """
    if window.is_empty:
        raise EmptyWindowError("theta scaling needs a non-empty window")
    from .geometry import theta_derivatives

    lo, hi = window.intervals[-1]
    curve = integrate_time(field, seed, hi, tol=tol, n_samples=64)
    if float(curve.t[-1]) < hi:
        raise PreconditionError(f"trajectory ended early: {curve.status}")
    z_lo = float(curve.dense(lo)[2])
    z_hi = float(curve.dense(hi)[2])
    axis_curve = reparam_axis_length(curve, field, n_samples=n_samples,
                                     z_span=(z_lo, z_hi))
    ders = theta_derivatives(axis_curve, field)
    t = axis_curve.t
    g = np.array([float(field.flux.value(tt)) for tt in t])
    g1 = np.array([float(field.flux.d1(tt)) for tt in t])
    g2 = np.array([float(field.flux.d2(tt)) for tt in t])
    ref2 = -g1 / g**3
    ref3 = -g2 / g**4
    applicable = float(np.max(np.abs(axis_curve.vtheta))) > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio2 = np.where((np.abs(ref2) > 0.0) & applicable, ders.theta2 / ref2, np.nan)
        ratio3 = np.where((np.abs(ref3) > 0.0) & applicable, ders.theta3 / ref3, np.nan)
    return ThetaScalingSeries(t=t, z=axis_curve.grid, theta2=ders.theta2,
                              theta3=ders.theta3, ref2=ref2, ref3=ref3,
                              ratio2=ratio2, ratio3=ratio3, applicable=applicable)


@dataclass
class SwirlAlignmentSeries:
    """Frame-against-azimuth quantities along the trajectory in the window."""

    t: np.ndarray
    n_dot_etheta: np.ndarray
    ds_kappa: np.ndarray
    kappa_T_b_etheta: np.ndarray
    reference: np.ndarray          # g''/g^4, the stated d_s kappa scaling
    cancellation_ratio: np.ndarray  # |kappa T (b.e_theta)| / |d_s kappa|
    degenerate: np.ndarray


def swirl_alignment_series(field: AxisymmetricField, seed: Seed,
                           window: FluxWindow, n_per_interval: int = 12,
                           tol: float = 1e-10) -> SwirlAlignmentSeries:
    """Chart n.e_theta, d_s kappa and the mixed term along window times.

    Emitted for charting only: the limits claimed for these quantities are
    asymptotic and not assertable at finite resolution.
    """
    if window.is_empty:
        raise EmptyWindowError("alignment series needs a non-empty window")
    if not isinstance(field, SwirlColumnField):
        raise PreconditionError("alignment series implemented for the column oracle")
    if field.swirl.w(seed.r0) == 0.0:
        raise PreconditionError("alignment series needs nonzero swirl at the seed")
    t_hi = max(hi for _, hi in window.intervals)
    curve = integrate_time(field, seed, t_hi, tol=tol, n_samples=8)
    times = _window_times(window, n_per_interval, float(curve.t[-1]))

    n = times.size
    nde = np.empty(n)
    dsk = np.empty(n)
    mixed = np.empty(n)
    ref = np.empty(n)
    degen = np.zeros(n, dtype=bool)
    for i, t in enumerate(times):
        fr = frenet_analytic_column(field, seed, float(t))
        theta = seed.theta0 + field.angular_rate(seed.r0) * (float(t) - seed.t0)
        e_th = np.array([-math.sin(theta), math.cos(theta), 0.0])
        nde[i] = float(fr.n @ e_th)
        dsk[i] = fr.ds_kappa
        mixed[i] = abs(fr.kappa * fr.torsion * float(fr.b @ e_th))
        g = float(field.flux.value(t))
        ref[i] = float(field.flux.d2(t)) / g**4
        degen[i] = fr.degenerate
    with np.errstate(divide="ignore", invalid="ignore"):
        cancel = np.where(np.abs(dsk) > 0.0, mixed / np.abs(dsk), np.nan)
    return SwirlAlignmentSeries(t=times, n_dot_etheta=nde, ds_kappa=dsk,
                                kappa_T_b_etheta=mixed, reference=ref,
                                cancellation_ratio=cancel, degenerate=degen)


# ---------------------------------------------------------------------------
# pressure identities
# ---------------------------------------------------------------------------

def _grad_p_dot(pressure: PressureMap, state: ProbeState,
                direction: np.ndarray) -> float:
    """grad p . direction; for axisymmetric p the gradient has no e_theta part."""
    e_r = np.array([math.cos(state.theta), math.sin(state.theta), 0.0])
    p_r = pressure.d_r(state.r, state.z, state.t)
    p_z = pressure.d_z(state.r, state.z, state.t)
    return p_r * float(e_r @ direction) + p_z * float(direction[2])


@dataclass(frozen=True)
class TangentialRateCheck:
    """|grad p . tau| against the speed rate, under both sign readings."""

    t_probe: float
    grad_p_tau: float
    rate: float
    residual_paper_literal: float
    residual_euler_consistent: float


def tangential_rate_check(field: AxisymmetricField, pressure: PressureMap | None,
                          seed: Seed, t_probe: float,
                          tol: float = 1e-10) -> TangentialRateCheck:
    if pressure is None:
        raise PreconditionError("tangential check needs an exact pressure map")
    state = _probe_state(field, seed, t_probe, tol)
    vr, vth, vz = field.velocity(state.r, state.z, t_probe)
    sp = math.hypot(vr, vth, vz)
    tau = np.array([
        (vr * math.cos(state.theta) - vth * math.sin(state.theta)) / sp,
        (vr * math.sin(state.theta) + vth * math.cos(state.theta)) / sp,
        vz / sp])
    gpt = _grad_p_dot(pressure, state, tau)
    return TangentialRateCheck(
        t_probe=t_probe, grad_p_tau=gpt, rate=state.rate,
        residual_paper_literal=abs(gpt - state.rate),
        residual_euler_consistent=abs(-gpt - state.rate))


@dataclass(frozen=True)
class FrameDerivativeCheck:
    """Curvature-side expressions vs normal-offset derivatives of the rate.

    lhs_r = 3 kappa d|u|/dt + d_s kappa |u|^2 against rhs_r = d_rbar(rate);
    lhs_z = T kappa |u|^2 against rhs_z = d_zbar(rate). Residuals are |lhs -
    rhs| under the Euler-consistent convention and |lhs + rhs| under the
    literal one. grad_p_b and normal_balance are the exact-solution
    cross-checks (both vanish for the catalog's exact solutions).
    """

    t_probe: float
    kappa: float
    torsion: float
    ds_kappa: float
    speed: float
    rate: float
    lhs_r: float
    lhs_z: float
    rhs_r: float
    rhs_z: float
    residual_r: float
    residual_z: float
    grad_p_b: float
    normal_balance: float
    sign_convention: SignConvention
    fd: FdSpec
    degenerate: bool


def frame_derivative_check(field: AxisymmetricField, pressure: PressureMap | None,
                           seed: Seed, t_probe: float, fd: FdSpec = FdSpec(),
                           convention: SignConvention = SignConvention.EULER_CONSISTENT,
                           tol: float = 1e-10) -> FrameDerivativeCheck:
    if pressure is None:
        raise PreconditionError("frame-derivative check needs an exact pressure map")
    state = _probe_state(field, seed, t_probe, tol)
    fr = state.frame
    x0 = state.position
    rhs_r = offset_rate_derivative(field, x0, fr.n, t_probe, fd.h, fd.richardson)
    rhs_z = offset_rate_derivative(field, x0, fr.b, t_probe, fd.h, fd.richardson)
    lhs_r = 3.0 * fr.kappa * state.rate + fr.ds_kappa * state.speed**2
    lhs_z = fr.torsion * fr.kappa * state.speed**2
    sign = -1.0 if convention is SignConvention.EULER_CONSISTENT else 1.0
    gpb = abs(_grad_p_dot(pressure, state, fr.b))
    gpn = _grad_p_dot(pressure, state, fr.n)
    return FrameDerivativeCheck(
        t_probe=t_probe, kappa=fr.kappa, torsion=fr.torsion,
        ds_kappa=fr.ds_kappa, speed=state.speed, rate=state.rate,
        lhs_r=lhs_r, lhs_z=lhs_z, rhs_r=rhs_r, rhs_z=rhs_z,
        residual_r=abs(lhs_r + sign * rhs_r),
        residual_z=abs(lhs_z + sign * rhs_z),
        grad_p_b=gpb,
        normal_balance=abs(-gpn - fr.kappa * state.speed**2),
        sign_convention=convention, fd=fd, degenerate=fr.degenerate)


@dataclass(frozen=True)
class RotationResidualReport:
    """Azimuthal-invariance residual in frame terms, both bracketings.

    T1 = (e_theta.n) kappa d|u|/dt, T2 = (e_theta.n) d_s kappa |u|^2,
    T3 = (e_theta.b) T kappa |u|^2. Variant A = |3(T1+T2) + T3|,
    variant B = |3 T1 + T2 + T3|. ``direct_fd`` differences the rate between
    trajectories launched from azimuth-rotated seeds (exactly zero for an
    axisymmetric field); ``measured_combination`` recombines the measured
    offset derivatives, including the tangential one, which is the version of
    the invariance statement that holds to FD accuracy.
    """

    t_probe: float
    term_1: float
    term_2: float
    term_3: float
    residual_a: float
    residual_b: float
    direct_fd: float
    measured_combination: float
    n_dot_etheta: float
    ds_kappa: float
    kappa_T_b_etheta: float
    sign_convention: SignConvention
    fd: FdSpec
    degenerate: bool

    def agreement(self, tol: float = 1e-4) -> str:
        a_ok = self.residual_a <= abs(self.direct_fd) + tol
        b_ok = self.residual_b <= abs(self.direct_fd) + tol
        if a_ok and b_ok:
            return "both"
        if a_ok:
            return "A"
        if b_ok:
            return "B"
        return "neither"


def rotation_residual(field: AxisymmetricField, seed: Seed, t_probe: float,
                      fd: FdSpec = FdSpec(),
                      convention: SignConvention = SignConvention.EULER_CONSISTENT,
                      tol: float = 1e-10,
                      dtheta: float = 1e-4) -> RotationResidualReport:
    state = _probe_state(field, seed, t_probe, tol)
    fr = state.frame
    e_th = state.e_theta
    nde = float(fr.n @ e_th)
    bde = float(fr.b @ e_th)
    t1 = nde * fr.kappa * state.rate
    t2 = nde * fr.ds_kappa * state.speed**2
    t3 = bde * fr.torsion * fr.kappa * state.speed**2

    x0 = state.position
    d_n = offset_rate_derivative(field, x0, fr.n, t_probe, fd.h, fd.richardson)
    d_b = offset_rate_derivative(field, x0, fr.b, t_probe, fd.h, fd.richardson)
    d_tau = offset_rate_derivative(field, x0, fr.tau, t_probe, fd.h, fd.richardson)
    tde = float(fr.tau @ e_th)
    measured = tde * d_tau + nde * d_n + bde * d_b

    # ground truth: rate difference between azimuth-rotated launches
    rate_p = _rotated_seed_rate(field, seed, t_probe, +dtheta, tol)
    rate_m = _rotated_seed_rate(field, seed, t_probe, -dtheta, tol)
    direct = (rate_p - rate_m) / (2.0 * dtheta)

    return RotationResidualReport(
        t_probe=t_probe, term_1=t1, term_2=t2, term_3=t3,
        residual_a=abs(3.0 * (t1 + t2) + t3), residual_b=abs(3.0 * t1 + t2 + t3),
        direct_fd=direct, measured_combination=measured,
        n_dot_etheta=nde, ds_kappa=fr.ds_kappa,
        kappa_T_b_etheta=abs(fr.kappa * fr.torsion * bde),
        sign_convention=convention, fd=fd, degenerate=fr.degenerate)


def _rotated_seed_rate(field: AxisymmetricField, seed: Seed, t_probe: float,
                       dtheta: float, tol: float) -> float:
    rotated = Seed(r0=seed.r0, theta0=seed.theta0 + dtheta, z0=seed.z0,
                   t0=seed.t0)
    curve = integrate_time(field, rotated, t_probe, tol=tol, n_samples=4)
    return speed_rate(field, float(curve.r[-1]), float(curve.z[-1]), t_probe)


# ---------------------------------------------------------------------------
# dominance of the frame terms against the window scalings
# ---------------------------------------------------------------------------

@dataclass
class DominanceTable:
    epsilon: float
    t: np.ndarray
    term_1: np.ndarray
    term_2: np.ndarray
    term_3: np.ndarray
    ref_term_1: np.ndarray       # -g'^2/g^3
    ref_term_2: np.ndarray       # -g''/g^2
    window_lhs: np.ndarray       # eps g'^2/g (must exceed 1 in-window)
    window_rhs: np.ndarray       # eps^2 g''  (must exceed window_lhs in-window)

    def rows(self):
        for i in range(self.t.size):
            yield [float(self.t[i]), float(self.term_1[i]), float(self.term_2[i]),
                   float(self.term_3[i]), float(self.ref_term_1[i]),
                   float(self.ref_term_2[i]), float(self.window_lhs[i]),
                   float(self.window_rhs[i])]


DOMINANCE_COLUMNS = ["t", "term_1", "term_2", "term_3", "ref_term_1",
                     "ref_term_2", "window_lhs", "window_rhs"]


def dominance_table(field: AxisymmetricField, seed: Seed, window: FluxWindow,
                    n_per_interval: int = 8, tol: float = 1e-10) -> DominanceTable:
    """Chart the three frame terms against their expected scalings in-window.

    Purely observational; refuses (EmptyWindowError) when the window is empty.
    """
    if window.is_empty:
        raise EmptyWindowError("no window: dominance table not defined")
    t_hi = max(hi for _, hi in window.intervals)
    curve = integrate_time(field, seed, t_hi, tol=tol, n_samples=8)
    times = _window_times(window, n_per_interval, float(curve.t[-1]),
                          max_total=64)

    n = times.size
    t1 = np.empty(n)
    t2 = np.empty(n)
    t3 = np.empty(n)
    for i, t in enumerate(times):
        s = curve.dense(float(t))
        state = _state_at(field, seed, float(s[0]), float(s[1]), float(s[2]),
                          float(t), tol)
        fr = state.frame
        e_th = state.e_theta
        nde = float(fr.n @ e_th)
        t1[i] = nde * fr.kappa * state.rate
        t2[i] = nde * fr.ds_kappa * state.speed**2
        t3[i] = float(fr.b @ e_th) * fr.torsion * fr.kappa * state.speed**2
    g = np.array([float(field.flux.value(t)) for t in times])
    g1 = np.array([float(field.flux.d1(t)) for t in times])
    g2 = np.array([float(field.flux.d2(t)) for t in times])
    eps = window.epsilon
    return DominanceTable(epsilon=eps, t=times, term_1=t1, term_2=t2, term_3=t3,
                          ref_term_1=-g1**2 / g**3, ref_term_2=-g2 / g**2,
                          window_lhs=eps * g1**2 / g, window_rhs=eps**2 * g2)
