"""Radial inverse Laplacian and Hartree energy.

For a radial density v the solution of Delta w = v that vanishes at
infinity is

    w(r) = -(1/r) int_0^r v(p) p^2 dp - int_r^inf v(p) p dp,
    w'(r) = (1/r^2) int_0^r v(p) p^2 dp.

Both integrals are evaluated with one forward and one backward cumulative
sum. The sums use the uniform weight h at every node, plus a local term
(h^2/12) v_i. With that term the scheme coincides with a Numerov solve of
(r w)'' = r v, so it is fourth-order accurate. It also keeps
diag(r^2) K symmetric, so the discrete Hartree energy and its gradient
stay exactly consistent.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import ResolutionWarning
from .radial_grid import RadialField, RadialGrid

TAIL_WARN = 1e-10


@dataclass(frozen=True)
class PoissonResult:
    """Solution of Delta w = v.

    Attributes
    ----------
    w : RadialField
        Inverse Laplacian of v.
    w_prime : RadialField
        Radial derivative of w.
    total_charge : float
        int_{R^3} v dx.
    """

    w: RadialField
    w_prime: RadialField
    total_charge: float


def _check_tail(grid: RadialGrid, v: np.ndarray) -> None:
    vmax = float(np.max(np.abs(v)))
    if vmax > 0 and abs(v[-1]) * grid.r_max ** 2 > TAIL_WARN * vmax:
        warnings.warn("density not negligible at r_max; far tail is truncated",
                      ResolutionWarning, stacklevel=3)


def inverse_laplacian_values(grid: RadialGrid, v: np.ndarray):
    """Array version of :func:`inverse_laplacian`.

    Returns (w, w_prime, total_charge) as plain arrays and a float.
    """
    r, h = grid.nodes, grid.h
    vr = v * r
    inner = h * np.cumsum(vr * r)
    # outer[i] = h * sum_{j > i} v_j r_j
    outer = np.empty_like(v)
    outer[-1] = 0.0
    outer[:-1] = h * np.cumsum(vr[::-1])[::-1][1:]
    w = -inner / r - outer + (h * h / 12.0) * v
    w_prime = (inner - 0.5 * h * vr * r) / (r * r)
    charge = 4.0 * math.pi * float(inner[-1])
    return w, w_prime, charge


def inverse_laplacian(v: RadialField) -> PoissonResult:
    """Solve Delta w = v for a radial density v.

    Parameters
    ----------
    v : RadialField
        Density samples. Its tail beyond r_max is treated as zero; a
        ResolutionWarning is raised when that is visibly wrong.

    Returns
    -------
    PoissonResult
    """
    _check_tail(v.grid, v.values)
    w, wp, charge = inverse_laplacian_values(v.grid, v.values)
    return PoissonResult(v.with_values(w), v.with_values(wp), charge)


def field_energy(rho: RadialField) -> float:
    """int |grad Delta^{-1} rho|^2 dx = -int rho Delta^{-1} rho dx."""
    w, _, _ = inverse_laplacian_values(rho.grid, rho.values)
    return -rho.grid.dot3d(rho.values, w)


def hartree_energy(u: RadialField) -> float:
    """Hartree self-energy -pi int (Delta^{-1} u^2) u^2 dx, always >= 0."""
    return math.pi * field_energy(u.with_values(u.values * u.values))


def electric_potential(u: RadialField) -> RadialField:
    """phi = 4 pi Delta^{-1} u^2; nonpositive, tends to -N/r far away."""
    rho = u.values * u.values
    _check_tail(u.grid, rho)
    w, _, _ = inverse_laplacian_values(u.grid, rho)
    return u.with_values(4.0 * math.pi * w)
