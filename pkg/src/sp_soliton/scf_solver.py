"""Self-consistent field solver for radial solitary waves.

Each iteration solves Poisson for phi, mixes it linearly with the previous
potential and takes the k-th eigenpair of the resulting linear problem. A
projected gradient flow on the sphere int u^2 = N is provided as an
independent route to the ground state.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import math
from typing import Callable

import numpy as np
from scipy.special import eval_genlaguerre

from . import kernels
from .energy_functional import (EnergyBreakdown, evaluate, gradient_values,
                                kinetic_energy_values)
from .errors import (ConvergenceError, NoBoundStateError, NoSolitaryWaveError,
                     SolitonError)
from .poisson_radial import electric_potential, inverse_laplacian_values
from .radial_eigensolver import (EigenPair, build_effective_potential,
                                 solve_kth_matrix, solve_kth_shooting)
from .radial_grid import (ProblemSpec, RadialField, RadialGrid, build_grid,
                          l2_norm_3d, normalize_to)

DEFAULT_H = 0.002
DEFAULT_R_MAX = 40.0
BACKENDS = ("matrix", "shooting")


def default_grid(k_index: int = 1, n: int | None = None,
                 r_max: float | None = None) -> RadialGrid:
    """Grid for branch k: r_max and n both scale with k^2 (fixed spacing)."""
    base_r = DEFAULT_R_MAX if r_max is None else float(r_max)
    base_n = int(round(base_r / DEFAULT_H)) if n is None else int(n)
    k2 = k_index * k_index
    return build_grid(base_n * k2, base_r * k2)


@dataclass(frozen=True)
class ScfConfig:
    """Iteration controls.

    Attributes
    ----------
    mixing_alpha : float
        Weight of the new potential in linear mixing, in (0, 1].
    tol_omega, tol_u : float
        Stop when successive eigenvalues and fields differ by less.
    max_iter : int
    backend : {"matrix", "shooting"}
    """

    mixing_alpha: float = 0.5
    tol_omega: float = 1e-9
    tol_u: float = 1e-7
    max_iter: int = 200
    backend: str = "matrix"

    def __post_init__(self):
        if not 0.0 < self.mixing_alpha <= 1.0:
            raise SolitonError(f"mixing_alpha must be in (0, 1], got {self.mixing_alpha}")
        if not (self.tol_omega > 0 and self.tol_u > 0):
            raise SolitonError("tolerances must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise SolitonError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.backend not in BACKENDS:
            raise SolitonError(f"backend must be one of {BACKENDS}, got {self.backend!r}")


@dataclass(frozen=True)
class SolitonState:
    """A (possibly unconverged) solution triple with derived fields.

    Attributes
    ----------
    u, phi : RadialField
        Wave function and its self-consistent potential 4 pi Delta^{-1} u^2.
    omega : float
    U : RadialField
        r u.
    Vred : RadialField
        -r phi; rises from 0 to the enclosed charge.
    energy : EnergyBreakdown
    k_index, iterations : int
    converged : bool
    spec : ProblemSpec
    """

    u: RadialField
    phi: RadialField
    omega: float
    U: RadialField
    Vred: RadialField
    energy: EnergyBreakdown
    k_index: int
    iterations: int
    converged: bool
    spec: ProblemSpec

    @property
    def grid(self) -> RadialGrid:
        return self.u.grid

    @classmethod
    def from_field(cls, u: RadialField, omega: float, spec: ProblemSpec,
                   iterations: int = 0, converged: bool = True) -> "SolitonState":
        """Build a state from u and omega, recomputing phi and the energies."""
        phi = electric_potential(u)
        r = u.grid.nodes
        return cls(u=u, phi=phi, omega=float(omega), U=u.with_values(r * u.values),
                   Vred=u.with_values(-r * phi.values), energy=evaluate(u, spec),
                   k_index=spec.k_index, iterations=iterations,
                   converged=converged, spec=spec)


def hydrogenic_guess(grid: RadialGrid, spec: ProblemSpec) -> RadialField:
    """k-th s-state of -1/2 Lap - z_eff/r, normalized to N.

    z_eff = max(z - N/2, z/2) roughly accounts for self-screening. Without
    a nucleus a unit-charge shape is used.
    """
    k = spec.k_index
    z_eff = max(spec.z - 0.5 * spec.n_charge, 0.5 * spec.z)
    if z_eff <= 0:
        z_eff = 1.0
    x = 2.0 * z_eff * grid.nodes / k
    u = np.exp(-0.5 * x) * eval_genlaguerre(k - 1, 1, x)
    return normalize_to(grid.field(u), spec.n_charge)


def gradient_residual(u: RadialField, omega: float, spec: ProblemSpec) -> float:
    """||J'(u) - omega u|| / sqrt(N)."""
    grid = u.grid
    res = gradient_values(grid, u.values, spec.z) - omega * u.values
    return math.sqrt(grid.dot3d(res, res) / grid.dot3d(u.values, u.values))


def _eigen(backend: str) -> Callable[..., EigenPair]:
    return solve_kth_matrix if backend == "matrix" else solve_kth_shooting


def _no_wave(spec: ProblemSpec) -> NoSolitaryWaveError:
    if spec.z == 0:
        why = "z = 0, effective potential is nonnegative"
    else:
        why = f"z = {spec.z:g}; bound state not resolved, increase r_max"
    return NoSolitaryWaveError(
        f"no negative eigenvalue: no solitary wave in this regime ({why})")


def solve(spec: ProblemSpec, cfg: ScfConfig | None = None,
          grid: RadialGrid | None = None,
          initial: RadialField | None = None) -> SolitonState:
    """Self-consistent k-th solitary wave.

    Parameters
    ----------
    spec : ProblemSpec
    cfg : ScfConfig, optional
    grid : RadialGrid, optional
        Defaults to ``default_grid(spec.k_index)``; ignored when ``initial``
        is given (its grid is used).
    initial : RadialField, optional
        Starting wave function; renormalized to N.

    Raises
    ------
    NoSolitaryWaveError
        The effective potential has no k-th bound state.
    ConvergenceError
        Iteration cap reached; the last iterate is attached.
    """
    cfg = cfg or ScfConfig()
    if initial is not None:
        grid = initial.grid
        u = normalize_to(initial, spec.n_charge)
    else:
        grid = grid or default_grid(spec.k_index)
        u = hydrogenic_guess(grid, spec)
    eig = _eigen(cfg.backend)
    alpha = cfg.mixing_alpha
    phi_mix = electric_potential(u).values
    omega_prev = math.inf
    omega = math.nan
    for it in range(1, cfg.max_iter + 1):
        q = build_effective_potential(grid.field(phi_mix), spec)
        try:
            pair = eig(q, spec.k_index, spec.n_charge)
        except NoBoundStateError as exc:
            raise _no_wave(spec) from exc
        u_new = pair.u
        omega = pair.omega
        du = l2_norm_3d(u_new.with_values(u_new.values - u.values))
        d_omega = abs(omega - omega_prev)
        u, omega_prev = u_new, omega
        phi_new = electric_potential(u).values
        if d_omega <= cfg.tol_omega and du <= cfg.tol_u:
            if cfg.backend != "matrix" or \
                    gradient_residual(u, omega, spec) <= 10.0 * cfg.tol_omega:
                return SolitonState.from_field(u, omega, spec, it, True)
        phi_mix = (1.0 - alpha) * phi_mix + alpha * phi_new
    state = SolitonState.from_field(u, omega, spec, cfg.max_iter, False)
    raise ConvergenceError("max iterations exceeded", state)


def spectrum_sweep(spec_base: ProblemSpec, cfg: ScfConfig | None, k_max: int,
                   n: int | None = None, r_max: float | None = None,
                   workers: int = 1) -> list[SolitonState]:
    """Solve branches k = 1..k_max, each on ``default_grid(k, n, r_max)``.

    Results are ordered by k regardless of ``workers``. Errors carry the
    failing k in their message.
    """
    if k_max < 1:
        raise SolitonError("k_max must be >= 1")

    def one(k: int) -> SolitonState:
        spec = replace(spec_base, k_index=k)
        try:
            return solve(spec, cfg, default_grid(k, n, r_max))
        except ConvergenceError as exc:
            raise ConvergenceError(f"k={k}: {exc}", exc.state) from exc
        except SolitonError as exc:
            raise type(exc)(f"k={k}: {exc}") from exc

    ks = range(1, k_max + 1)
    if workers <= 1:
        return [one(k) for k in ks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, ks))


def _energy_value(grid: RadialGrid, u: np.ndarray, z: float) -> float:
    rho = u * u
    w, _, _ = inverse_laplacian_values(grid, rho)
    return (kinetic_energy_values(grid, u) - math.pi * grid.dot3d(rho, w)
            - 2.0 * math.pi * grid.h * z * float(np.dot(rho, grid.nodes)))


def gradient_flow_ground_state(spec: ProblemSpec, grid: RadialGrid | None = None,
                               initial: RadialField | None = None,
                               tol: float = 1e-7, max_iter: int = 2000,
                               shift: float = 0.5) -> SolitonState:
    """Minimize J on the sphere int u^2 = N by projected descent.

    The descent direction is the sphere-projected gradient preconditioned
    by (-1/2 d^2/dr^2 + shift) acting on U = r u. Steps follow an Armijo
    backtracking rule, then the iterate is pulled back onto the sphere.
    Stops when ||J'(u) - omega u|| / sqrt(N) <= tol. Energy decreases
    fall below double rounding once that residual nears 1e-8, so much
    smaller tolerances make the line search stall.
    """
    if spec.k_index != 1:
        raise SolitonError("gradient flow computes the ground state only (k = 1)")
    if initial is not None:
        grid = initial.grid
        u = normalize_to(initial, spec.n_charge).values
    else:
        grid = grid or default_grid(1)
        u = hydrogenic_guess(grid, spec).values
    r, h, N = grid.nodes, grid.h, spec.n_charge
    pd = np.full(grid.n, 1.0 / (h * h) + shift)
    pe = np.full(grid.n - 1, -0.5 / (h * h))

    def unit(v):
        return v * math.sqrt(N / grid.dot3d(v, v))

    J = _energy_value(grid, u, spec.z)
    step = 1.0
    for it in range(1, max_iter + 1):
        g = gradient_values(grid, u, spec.z)
        omega = grid.dot3d(g, u) / N
        res = g - omega * u
        if math.sqrt(grid.dot3d(res, res) / N) <= tol:
            return SolitonState.from_field(grid.field(u), omega, spec, it, True)
        # preconditioned gradient, made tangent in the preconditioner metric
        U = r * u
        pg = kernels.solve_tridiagonal(pd, pe, r * g)
        pu = kernels.solve_tridiagonal(pd, pe, U)
        d = (pg - (np.dot(pg, U) / np.dot(pu, U)) * pu) / r
        slope = grid.dot3d(g, d)
        if slope <= 0:
            d, slope = res, grid.dot3d(res, res)
        while True:
            trial = unit(u - step * d)
            J_trial = _energy_value(grid, trial, spec.z)
            if J_trial <= J - 1e-4 * step * slope:
                break
            step *= 0.5
            if step < 1e-12:
                state = SolitonState.from_field(grid.field(u), omega, spec, it, False)
                raise ConvergenceError("line search stalled", state)
        u, J = trial, J_trial
        step = min(2.0 * step, 4.0)
    state = SolitonState.from_field(grid.field(u), omega, spec, max_iter, False)
    raise ConvergenceError("max iterations exceeded", state)
