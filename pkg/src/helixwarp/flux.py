"""Through-flow profiles g(t) and the oscillation-window locator.

Three profile families are supported on t in [0, 1): a constant flow, an
inverse-power blowup (1-t)^-beta, and the oscillating profile
2 + (1-t)^beta1 * sin((1-t)^-beta2). All derivatives are closed-form.

The window locator scans for the double inequality

    1 < eps * g'(t)^2 / g(t) < eps^2 * g''(t)

on a uniform grid inside [1-eps, 1) and returns the maximal grid intervals
where both strict inequalities hold.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: closest approach to the t=1 singularity during window scans
GUARD_DISTANCE = 1e-9


class FluxProfile:
    """Scalar through-flow g(t) with analytic first and second derivatives."""

    def value(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    def _check_domain(self, t) -> None:
        t = np.asarray(t)
        if np.any(t >= 1.0):
            raise DomainError("flux singular at t=1")
        if np.any(t < 0.0):
            raise DomainError("flux profile defined on t in [0, 1)")

    def condition_feature_scale(self, t, epsilon: float):
        """Width of the narrowest sign feature of the window condition near t.

        Infinite for monotone profiles. Window scans mask grid regions whose
        cells are coarser than this scale: an undersampled scan would alias
        spurious intervals there.
        """
        return np.full_like(np.asarray(t, dtype=float), np.inf)


@dataclass(frozen=True)
class UniformFlux(FluxProfile):
    c: float = 2.0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("uniform flux must be positive")

    def value(self, t):
        self._check_domain(t)
        return self.c * np.ones_like(np.asarray(t, dtype=float))

    def d1(self, t):
        self._check_domain(t)
        return np.zeros_like(np.asarray(t, dtype=float))

    def d2(self, t):
        self._check_domain(t)
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class PowerLawFlux(FluxProfile):
    """g(t) = (1-t)^-beta, blowing up at t=1."""

    beta: float = 1.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    def value(self, t):
        self._check_domain(t)
        return (1.0 - np.asarray(t, dtype=float)) ** (-self.beta)

    def d1(self, t):
        self._check_domain(t)
        b = self.beta
        return b * (1.0 - np.asarray(t, dtype=float)) ** (-b - 1.0)

    def d2(self, t):
        self._check_domain(t)
        b = self.beta
        return b * (b + 1.0) * (1.0 - np.asarray(t, dtype=float)) ** (-b - 2.0)


@dataclass(frozen=True)
class OscillatingFlux(FluxProfile):
    """g(t) = 2 + (1-t)^beta1 * sin((1-t)^-beta2).

    Stays in [1, 3] for beta1 >= 0 because |s^beta1 * sin| <= 1 on s <= 1,
    while g' and g'' oscillate with amplitudes growing like s^(beta1-beta2-1)
    and s^(beta1-2*beta2-2) as s = 1-t -> 0.
    """

    beta1: float = 1.0
    beta2: float = 2.0

    def __post_init__(self):
        if self.beta1 <= 0 or self.beta2 <= 0:
            raise ValueError("beta1 and beta2 must be positive")

    def value(self, t):
        self._check_domain(t)
        s = 1.0 - np.asarray(t, dtype=float)
        return 2.0 + s**self.beta1 * np.sin(s ** (-self.beta2))

    def d1(self, t):
        self._check_domain(t)
        b1, b2 = self.beta1, self.beta2
        s = 1.0 - np.asarray(t, dtype=float)
        sig = s ** (-b2)
        return -b1 * s ** (b1 - 1.0) * np.sin(sig) + b2 * s ** (b1 - b2 - 1.0) * np.cos(sig)

    def d2(self, t):
        self._check_domain(t)
        b1, b2 = self.beta1, self.beta2
        s = 1.0 - np.asarray(t, dtype=float)
        sig = s ** (-b2)
        return (b1 * (b1 - 1.0) * s ** (b1 - 2.0) * np.sin(sig)
                - b2 * (2.0 * b1 - b2 - 1.0) * s ** (b1 - b2 - 2.0) * np.cos(sig)
                - b2**2 * s ** (b1 - 2.0 * b2 - 2.0) * np.sin(sig))

    def condition_feature_scale(self, t, epsilon: float):
        # Within each phase cycle the left inequality eps g'^2/g > 1 fails in
        # a sliver around the zeros of cos(s^-beta2), of phase half-width
        # ~ sqrt(g eps^-1) / (beta2 s^(beta1-beta2-1)). Converted to time
        # (phase rate beta2 s^-(beta2+1)) and with g bounded below by 1, the
        # sliver width is at least ~ eps^-1/2 s^(2 beta2 + 2 - beta1)/beta2^2,
        # the narrowest feature the scan must resolve.
        s = 1.0 - np.asarray(t, dtype=float)
        expo = 2.0 * self.beta2 + 2.0 - self.beta1
        return s**expo / (np.sqrt(epsilon) * self.beta2**2)


def eval_flux(profile: FluxProfile, t: float) -> tuple[float, float, float]:
    """Return (g, g', g'') at a single time, with positivity checked."""
    g = float(profile.value(t))
    if g <= 0.0:
        raise DomainError(f"flux profile non-positive at t={t}: g={g}")
    return g, float(profile.d1(t)), float(profile.d2(t))


def verify_flux_derivatives(profile: FluxProfile, t_samples, h: float) -> float:
    """Max relative error of the analytic g', g'' against central differences.

    Second-order differences with step h; every sample +/- h must stay in
    [0, 1). Intended as a self-check for the test suite.
    """
    worst = 0.0
    for t in np.atleast_1d(np.asarray(t_samples, dtype=float)):
        if t - h < 0.0 or t + h >= 1.0:
            raise DomainError(f"sample t={t} with step h={h} leaves [0, 1)")
        gm, g0, gp = (float(profile.value(x)) for x in (t - h, t, t + h))
        d1_fd = (gp - gm) / (2.0 * h)
        d2_fd = (gp - 2.0 * g0 + gm) / h**2
        d1, d2 = float(profile.d1(t)), float(profile.d2(t))
        worst = max(worst,
                    abs(d1 - d1_fd) / max(1.0, abs(d1)),
                    abs(d2 - d2_fd) / max(1.0, abs(d2)))
    return worst


@dataclass(frozen=True)
class FluxWindow:
    """Sub-intervals of [1-eps, 1) where the oscillation condition holds."""

    epsilon: float
    intervals: tuple[tuple[float, float], ...]
    samples_per_unit: int = field(default=0)

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        lo = 1.0 - self.epsilon
        prev_hi = -np.inf
        for t_lo, t_hi in self.intervals:
            if not (lo <= t_lo < t_hi < 1.0):
                raise ValueError(f"interval ({t_lo}, {t_hi}) outside [1-eps, 1)")
            if t_lo <= prev_hi:
                raise ValueError("intervals must be disjoint and sorted")
            prev_hi = t_hi

    @property
    def is_empty(self) -> bool:
        return len(self.intervals) == 0

    def contains(self, t: float) -> bool:
        return any(lo <= t <= hi for lo, hi in self.intervals)


def window_condition(profile: FluxProfile, epsilon: float, t) -> np.ndarray:
    """Boolean mask of the double inequality 1 < eps g'^2/g < eps^2 g''."""
    g = profile.value(t)
    mid = epsilon * profile.d1(t) ** 2 / g
    return (mid > 1.0) & (mid < epsilon**2 * profile.d2(t))


def find_flux_windows(profile: FluxProfile, epsilon: float,
                      resolution: int = 200_000,
                      guard: float = GUARD_DISTANCE,
                      resolve_cells: int = 12) -> FluxWindow:
    """Scan [1-eps, 1-guard] on a uniform grid and merge passing runs.

    Interval endpoints are reported at grid resolution (no root polishing);
    the condition holds on open sets so downstream consumers only need
    interior points. Grid regions where the condition's sign features are
    narrower than ``resolve_cells`` grid cells are masked out: an
    undersampled scan would alias spurious intervals there. Refining the
    grid extends the resolved region monotonically toward t = 1.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if resolution < 1_000:
        raise ValueError("resolution must be at least 1000")
    t_lo, t_hi = 1.0 - epsilon, 1.0 - guard
    grid = np.linspace(t_lo, t_hi, resolution)
    cell = (t_hi - t_lo) / (resolution - 1)
    ok = window_condition(profile, epsilon, grid)
    ok &= profile.condition_feature_scale(grid, epsilon) >= resolve_cells * cell

    intervals: list[tuple[float, float]] = []
    edges = np.flatnonzero(np.diff(ok.astype(np.int8)))
    starts = list(edges[~ok[edges]] + 1)
    stops = list(edges[ok[edges]])
    if ok[0]:
        starts.insert(0, 0)
    if ok[-1]:
        stops.append(resolution - 1)
    for i0, i1 in zip(starts, stops):
        if i1 > i0:  # at least two consecutive passing points
            intervals.append((float(grid[i0]), float(grid[i1])))

    spu = int(round((resolution - 1) / (t_hi - t_lo)))
    return FluxWindow(epsilon=epsilon, intervals=tuple(intervals),
                      samples_per_unit=spu)


def flux_from_config(spec: dict) -> FluxProfile:
    """Build a profile from a config mapping like {"kind": "oscillating", ...}."""
    kinds = {
        "uniform": (UniformFlux, {"value": "c"}),
        "power_law": (PowerLawFlux, {"beta": "beta"}),
        "oscillating": (OscillatingFlux, {"beta1": "beta1", "beta2": "beta2"}),
    }
    kind = spec.get("kind")
    if kind not in kinds:
        raise DomainError(f"unknown flux kind: {kind!r}")
    cls, keymap = kinds[kind]
    kwargs = {attr: float(spec[key]) for key, attr in keymap.items() if key in spec}
    return cls(**kwargs)
