"""Finite-difference weights and table differentiation helpers.

Weights come from Fornberg's recursion, so any stencil width, offset, and
derivative order share one code path; uniform-grid convenience wrappers apply
centered stencils in the interior and shifted ones at the edges.
"""
from __future__ import annotations

import numpy as np


def fd_weights(nodes: np.ndarray, x0: float, deriv: int) -> np.ndarray:
    """Weights w such that f^(deriv)(x0) ~ sum(w * f(nodes)).

    Fornberg's algorithm; exact for polynomials up to degree len(nodes)-1.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    if deriv >= n:
        raise ValueError("stencil too small for requested derivative")
    c = np.zeros((n, deriv + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    x_prev = nodes[0] - x0
    for i in range(1, n):
        mn = min(i, deriv)
        c2 = 1.0
        x_i = nodes[i] - x0
        for j in range(i):
            x_j = nodes[j] - x0
            dx = x_i - x_j
            c2 *= dx
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - x_prev * c[i - 1, k]) / c2
                c[i, 0] = -c1 * x_prev * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (x_i * c[j, k] - k * c[j, k - 1]) / dx
            c[j, 0] = x_i * c[j, 0] / dx
        c1 = c2
        x_prev = x_i
    return c[:, deriv]


def uniform_diff(values: np.ndarray, h: float, deriv: int, order: int = 4,
                 axis: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Differentiate samples on a uniform grid of spacing h along `axis`.

    Returns (derivative, boundary_mask). Interior points use a centered
    stencil of accuracy `order`; near the edges the same-width stencil is
    shifted (one-sided, lower accuracy) and flagged True in the mask.
    """
    values = np.asarray(values, dtype=float)
    width = deriv + order
    if width % 2 == 0:
        width += 1
    half = width // 2
    n = values.shape[axis]
    if n < width:
        raise ValueError(f"need at least {width} samples along axis, got {n}")

    moved = np.moveaxis(values, axis, 0)
    out = np.empty_like(moved)
    boundary = np.zeros(n, dtype=bool)
    offsets = np.arange(width, dtype=float)

    w_center = fd_weights(offsets, half, deriv) / h**deriv
    interior = moved[np.arange(width)[:, None] + np.arange(n - width + 1)[None, :]]
    centered = np.tensordot(w_center, interior, axes=(0, 0))
    out[half:n - half] = centered

    for i in range(half):
        w = fd_weights(offsets, i, deriv) / h**deriv
        out[i] = np.tensordot(w, moved[:width], axes=(0, 0))
        boundary[i] = True
        w = fd_weights(offsets, width - 1 - i, deriv) / h**deriv
        out[n - 1 - i] = np.tensordot(w, moved[n - width:], axes=(0, 0))
        boundary[n - 1 - i] = True

    return np.moveaxis(out, 0, axis), boundary


def table_mixed_diff(table: np.ndarray, h0: float, h1: float,
                     d0: int, d1: int, order: int = 4) -> np.ndarray:
    """Mixed partial of a 2D table: d0 derivatives along axis 0, d1 along axis 1."""
    out = np.asarray(table, dtype=float)
    if d0:
        out, _ = uniform_diff(out, h0, d0, order=order, axis=0)
    if d1:
        out, _ = uniform_diff(out, h1, d1, order=order, axis=1)
    return out
