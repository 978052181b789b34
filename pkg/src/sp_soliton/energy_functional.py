"""Energy functional J = T + E_H - C_V, its gradient, and identity residuals.

All derivatives act on the reduced variable U = r u, where the radial
Laplacian becomes U''/r. The discrete kinetic energy is the Dirichlet
form of the three-point second difference with U(0) = U(r_max + h) = 0,
so that ``gradient`` is the exact derivative of ``evaluate`` under the
grid inner product ``RadialGrid.dot3d``.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import DegenerateStateWarning
from .poisson_radial import inverse_laplacian_values
from .radial_grid import ProblemSpec, RadialField, RadialGrid


@dataclass(frozen=True)
class EnergyBreakdown:
    """Terms of J for one field.

    Attributes
    ----------
    kinetic : float
        T = (1/4) int |grad u|^2.
    hartree : float
        E_H = -pi int (Delta^{-1} u^2) u^2.
    coulomb : float
        C_V = (1/2) int (z/r) u^2.
    total_j : float
        T + E_H - C_V.
    rayleigh_omega : float
        <J'(u), u> / N; equals omega at a critical point.
    """

    kinetic: float
    hartree: float
    coulomb: float
    total_j: float
    rayleigh_omega: float


def second_difference(U: np.ndarray, h: float) -> np.ndarray:
    """U'' by central differences with zero ghost values at both ends."""
    d2 = -2.0 * U
    d2[1:] += U[:-1]
    d2[:-1] += U[1:]
    return d2 / (h * h)


def kinetic_energy_values(grid: RadialGrid, u: np.ndarray) -> float:
    U = grid.nodes * u
    diffs = np.diff(U, prepend=0.0, append=0.0)
    return float(math.pi / grid.h * np.dot(diffs, diffs))


def _terms(grid: RadialGrid, u: np.ndarray, z: float):
    r, h = grid.nodes, grid.h
    rho = u * u
    w, _, _ = inverse_laplacian_values(grid, rho)
    kinetic = kinetic_energy_values(grid, u)
    hartree = -math.pi * grid.dot3d(rho, w)
    coulomb = 2.0 * math.pi * h * z * float(np.dot(rho, r))
    return kinetic, hartree, coulomb, w


def evaluate(u: RadialField, spec: ProblemSpec) -> EnergyBreakdown:
    """Energy terms of u for nuclear charge ``spec.z``."""
    grid = u.grid
    T, EH, CV, _ = _terms(grid, u.values, spec.z)
    norm2 = grid.dot3d(u.values, u.values)
    # <J'(u), u> = 2T + 4E_H - 2C_V
    omega = (2.0 * T + 4.0 * EH - 2.0 * CV) / norm2 if norm2 > 0 else 0.0
    return EnergyBreakdown(T, EH, CV, T + EH - CV, omega)


def gradient_values(grid: RadialGrid, u: np.ndarray, z: float) -> np.ndarray:
    r, h = grid.nodes, grid.h
    U = r * u
    w, _, _ = inverse_laplacian_values(grid, u * u)
    phi = 4.0 * math.pi * w
    gt = -0.5 * second_difference(U, h) - phi * U - (z / r) * U
    return gt / r


def gradient(u: RadialField, spec: ProblemSpec) -> RadialField:
    """L2 representative of J'(u): -1/2 Lap u - phi u - (z/r) u."""
    return u.with_values(gradient_values(u.grid, u.values, spec.z))


def _relative(num: float, den: float) -> float:
    if den == 0.0 or not math.isfinite(den):
        warnings.warn("residual evaluated on a zero state", DegenerateStateWarning,
                      stacklevel=3)
        return 0.0
    return abs(num) / den


def multiplier_residual(state) -> float:
    """Relative defect of N*omega = 2J + 2E_H.

    ``state`` needs ``u`` (RadialField), ``omega`` and ``energy``.
    A zero field returns 0.0 with a DegenerateStateWarning.
    """
    e = state.energy
    n_charge = state.u.grid.dot3d(state.u.values, state.u.values)
    lhs = n_charge * state.omega
    rhs = 2.0 * e.total_j + 2.0 * e.hartree
    return _relative(lhs - rhs, abs(lhs) + abs(e.total_j) + e.hartree)


def virial_residual(state) -> float:
    """Relative defect of 2T + E_H - C_V = 0 (mass-preserving dilations)."""
    return virial_residual_of(state.energy)


def virial_residual_of(e: EnergyBreakdown) -> float:
    return _relative(2.0 * e.kinetic + e.hartree - e.coulomb,
                     2.0 * e.kinetic + e.hartree + abs(e.coulomb))
