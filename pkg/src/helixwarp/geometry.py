"""Frame geometry of sampled curves: curvature, torsion, angle derivatives,
and the moving-frame coordinate chart.

Conventions: the binormal is b = tau x n (right-handed), torsion is signed,
and frames are undefined (flagged degenerate) where curvature falls below
``KAPPA_FLOOR``. A signed torsion keeps the frame continuous along the curve,
which finite differences of n and b require; consumers wanting a positive
torsion can fold the sign into b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._fd import uniform_diff
from .errors import ChartDomainError, DomainError
from .field import SwirlColumnField
from .trajectory import AxisRates, Curve, CurveParam, Seed, axis_length_rates

#: below this curvature a sample counts as straight (frame undefined)
KAPPA_FLOOR = 1e-10


@dataclass(frozen=True)
class FrenetFrame:
    """Orthonormal (tau, n, b) with curvature data at one curve sample."""

    tau: np.ndarray
    n: np.ndarray
    b: np.ndarray
    kappa: float
    torsion: float
    ds_kappa: float
    degenerate: bool = False
    boundary: bool = False


def frenet_from_curve(curve: Curve, stencil: int = 5) -> list[FrenetFrame]:
    """Finite-difference frames on a uniformly arc-length-sampled curve.

    tau comes from differencing positions (then normalized), kappa*n from
    differencing tau, b = tau x n, and the torsion from projecting
    d_s n + kappa*tau onto b. Endpoint samples use shifted stencils and are
    flagged ``boundary`` (one order lower).
    """
    if curve.param is not CurveParam.ARC_LENGTH:
        raise DomainError("frames need an arc-length-parameterized curve")
    if stencil < 5 or stencil % 2 == 0:
        raise ValueError("stencil must be an odd integer >= 5")
    grid = curve.grid
    steps = np.diff(grid)
    h = float(steps[0])
    if not np.allclose(steps, h, rtol=1e-8):
        raise DomainError("arc-length grid must be uniform")
    order = stencil - 1

    pos = curve.positions()
    tau_raw, _ = uniform_diff(pos, h, 1, order=order, axis=0)
    tau = tau_raw / np.linalg.norm(tau_raw, axis=1, keepdims=True)
    dtau, _ = uniform_diff(tau, h, 1, order=order, axis=0)
    kappa = np.linalg.norm(dtau, axis=1)
    degenerate = kappa < KAPPA_FLOOR

    n = np.zeros_like(tau)
    ok = ~degenerate
    n[ok] = dtau[ok] / kappa[ok, None]
    b = np.cross(tau, n)
    ds_kappa, _ = uniform_diff(kappa, h, 1, order=order, axis=0)
    # d_s n via kappa * d_s n = d_s^2 tau - (d_s kappa) n: differencing tau
    # directly avoids the noise amplification of differencing normalized n
    d2tau, _ = uniform_diff(tau, h, 2, order=order, axis=0)
    dn = np.zeros_like(tau)
    dn[ok] = (d2tau[ok] - ds_kappa[ok, None] * n[ok]) / kappa[ok, None]
    torsion = np.einsum("ij,ij->i", dn + kappa[:, None] * tau, b)

    # one-sided stencils contaminate a cascade-deep zone at each end
    half = (order + 2) // 2
    n_samples = len(curve)
    idx = np.arange(n_samples)
    boundary = (idx < 3 * half) | (idx >= n_samples - 3 * half)

    frames = []
    for i in range(n_samples):
        frames.append(FrenetFrame(
            tau=tau[i], n=n[i], b=b[i], kappa=float(kappa[i]),
            torsion=0.0 if degenerate[i] else float(torsion[i]),
            ds_kappa=float(ds_kappa[i]), degenerate=bool(degenerate[i]),
            boundary=bool(boundary[i])))
    return frames


def _column_state(field: SwirlColumnField, seed: Seed, t: float):
    w = field.swirl.w(seed.r0)
    omega = field.angular_rate(seed.r0)
    g = float(field.flux.value(t))
    g1 = float(field.flux.d1(t))
    g2 = float(field.flux.d2(t))
    q = math.hypot(w, g)
    theta = seed.theta0 + omega * (t - seed.t0)
    return w, omega, g, g1, g2, q, theta


def frenet_analytic_column(field: SwirlColumnField, seed: Seed, t: float) -> FrenetFrame:
    """Closed-form frame of the column trajectory (a variable-pitch helix).

    With W = W(r0), omega = W/r0, q = |u| = sqrt(W^2 + g^2) and
    Lambda = sqrt(g'^2 + omega^2 q^2):

        kappa     = W * Lambda / q^3
        torsion   = omega (omega^2 g + g'') / Lambda^2
        d_s kappa = (d/dt kappa) / q

    Uniform flux reduces to the constant-pitch helix values
    kappa = a omega^2 / (a^2 omega^2 + g^2), T = omega g / (a^2 omega^2 + g^2).
    """
    if not isinstance(field, SwirlColumnField):
        raise DomainError("analytic frames exist only for the swirling column")
    w, omega, g, g1, g2, q, theta = _column_state(field, seed, t)
    e_r = np.array([math.cos(theta), math.sin(theta), 0.0])
    e_th = np.array([-math.sin(theta), math.cos(theta), 0.0])
    e_z = np.array([0.0, 0.0, 1.0])

    tau = (w * e_th + g * e_z) / q
    if w == 0.0:
        return FrenetFrame(tau=tau, n=np.zeros(3), b=np.zeros(3), kappa=0.0,
                           torsion=0.0, ds_kappa=0.0, degenerate=True)

    lam = math.sqrt(g1**2 + omega**2 * q**2)
    n = (-(omega * q / lam) * e_r - (g * g1 / (q * lam)) * e_th
         + (w * g1 / (q * lam)) * e_z)
    b = (g1 / lam) * e_r - (g * omega / lam) * e_th + (w * omega / lam) * e_z

    kappa = w * lam / q**3
    torsion = omega * (omega**2 * g + g2) / lam**2
    q_dot = g * g1 / q
    lam_dot = g1 * (g2 + omega**2 * g) / lam
    kappa_dot = w * (lam_dot / q**3 - 3.0 * lam * q_dot / q**4)
    return FrenetFrame(tau=tau, n=n, b=b, kappa=kappa, torsion=torsion,
                       ds_kappa=kappa_dot / q)


def column_speed_state(field: SwirlColumnField, seed: Seed, t: float) -> tuple[float, float]:
    """(|u|, d|u|/dt) along the column trajectory, in closed form."""
    w, _, g, g1, _, q, _ = _column_state(field, seed, t)
    return q, g * g1 / q


# ---------------------------------------------------------------------------
# angle derivatives along the z-parameterization
# ---------------------------------------------------------------------------

@dataclass
class ThetaDerivatives:
    """FD derivatives of theta(z) next to their leading-term field formulas.

    theta2_formula = -v_theta * (dv_z/dz) / v_z^2 and
    theta3_formula = -v_theta * (d^2v_z/dz^2)/v_z^2 + 2 v_theta (dv_z/dz)^2/v_z^3
    with total derivatives along the curve; these leading terms carry an
    implicit 1/r relative to the exact theta''(z), theta'''(z) (for the pure
    column, formula/r reproduces the FD values exactly).
    """

    z: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray
    theta3: np.ndarray
    theta2_formula: np.ndarray
    theta3_formula: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    boundary: np.ndarray


def theta_derivatives(curve: Curve, field, order: int = 4) -> ThetaDerivatives:
    if curve.param is not CurveParam.AXIS_LENGTH:
        raise DomainError("theta derivatives need an axis-length curve")
    z = curve.grid
    h = float(z[1] - z[0])
    th1, b1 = uniform_diff(curve.theta, h, 1, order=order)
    th2, b2 = uniform_diff(curve.theta, h, 2, order=order)
    th3, b3 = uniform_diff(curve.theta, h, 3, order=order)

    n = len(curve)
    f2 = np.empty(n)
    f3 = np.empty(n)
    r1 = np.empty(n)
    r2 = np.empty(n)
    for i in range(n):
        rates: AxisRates = axis_length_rates(field, float(curve.r[i]),
                                             float(z[i]), float(curve.t[i]))
        vth, vz = rates.jet.vtheta.val, rates.jet.vz.val
        f2[i] = -vth * rates.d_vz / vz**2
        f3[i] = -vth * rates.d2_vz / vz**2 + 2.0 * vth * rates.d_vz**2 / vz**3
        r1[i], r2[i] = rates.r1, rates.r2
    return ThetaDerivatives(z=z, theta1=th1, theta2=th2, theta3=th3,
                            theta2_formula=f2, theta3_formula=f3,
                            r1=r1, r2=r2, boundary=b1 | b2 | b3)


# ---------------------------------------------------------------------------
# moving-frame chart
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MovingFrameChart:
    """Chart matrices around a curve point in normal coordinates.

    M maps the coordinate-derivative operators (d_thetabar, d_rbar, d_zbar)
    to frame coefficients on (tau, n, b); M_inv is its exact inverse, whose
    first row gives the tau-direction derivative coefficients
    ((1-kappa rbar)^-1, -zbar T (1-kappa rbar)^-1, -rbar T (1-kappa rbar)^-1).
    On the curve (rbar = zbar = 0) both matrices are the identity.
    """

    kappa: float
    torsion: float
    rbar: float
    zbar: float
    M: np.ndarray
    M_inv: np.ndarray

    @property
    def tau_coefficients(self) -> np.ndarray:
        return self.M_inv[0]

    @property
    def product_error(self) -> float:
        return float(np.max(np.abs(self.M @ self.M_inv - np.eye(3))))


def moving_frame_chart(kappa: float, torsion: float, rbar: float,
                       zbar: float) -> MovingFrameChart:
    a = 1.0 - kappa * rbar
    if abs(a) <= 1e-6:
        raise ChartDomainError(f"chart singular: 1 - kappa*rbar = {a}")
    m = np.array([[a, zbar * torsion, rbar * torsion],
                  [0.0, 1.0, 0.0],
                  [0.0, 0.0, 1.0]])
    m_inv = np.array([[1.0 / a, -zbar * torsion / a, -rbar * torsion / a],
                      [0.0, 1.0, 0.0],
                      [0.0, 0.0, 1.0]])
    return MovingFrameChart(kappa=kappa, torsion=torsion, rbar=rbar, zbar=zbar,
                            M=m, M_inv=m_inv)
