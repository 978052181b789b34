"""k-th eigenpair of -1/2 U'' + q U = omega U with U(0) = 0.

Two independent backends:

* matrix: three-point finite differences with Dirichlet ends, Sturm-count
  bisection for the eigenvalue and inverse iteration for the vector.
* shooting: RK4 from the origin, node counting plus a logarithmic
  derivative match to exp(-kappa r) at R_m = min(r_max, 25/kappa).
"""
from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np

from . import kernels
from .errors import BracketError, GridError, NoBoundStateError, ResolutionWarning
from .radial_grid import ProblemSpec, RadialField, RadialGrid

EIG_TOL = 1e-12
SHIFT = 1e-10
MAX_INVERSE_ITER = 5
DECAY_EFOLDS = 25.0
ZERO_FRACTION = 1e-12


@dataclass(frozen=True)
class EffectivePotential:
    """q(r) = -phi(r) - z/r together with its two parts.

    Attributes
    ----------
    q : RadialField
    phi : RadialField
        Electrostatic potential (zero for the bare Coulomb problem).
    z : float
    """

    q: RadialField
    phi: RadialField
    z: float

    @property
    def grid(self) -> RadialGrid:
        return self.q.grid

    @property
    def smooth(self) -> np.ndarray:
        """-phi, the part of q without the 1/r singularity."""
        return -self.phi.values


@dataclass(frozen=True)
class EigenPair:
    """Reduced eigenfunction U = r u normalized to 4 pi int U^2 dr = N.

    Attributes
    ----------
    omega : float
    U : RadialField
    node_count : int
    """

    omega: float
    U: RadialField
    node_count: int

    @property
    def u(self) -> RadialField:
        return self.U.with_values(self.U.values / self.U.grid.nodes)


def build_effective_potential(phi: RadialField, spec: ProblemSpec) -> EffectivePotential:
    """q = -phi - z/r on phi's grid."""
    z = float(spec.z)
    q = -phi.values - z / phi.grid.nodes
    return EffectivePotential(phi.with_values(q), phi, z)


def coulomb_potential(grid: RadialGrid, z: float) -> EffectivePotential:
    """Effective potential of the bare nucleus (phi = 0)."""
    phi = grid.field(np.zeros(grid.n))
    return EffectivePotential(phi.with_values(-float(z) / grid.nodes), phi, float(z))


def count_nodes(U: RadialField) -> int:
    """Strict sign changes of U, ignoring entries below 1e-12 max|U|."""
    v = np.asarray(U.values if isinstance(U, RadialField) else U, dtype=float)
    vmax = float(np.max(np.abs(v))) if v.size else 0.0
    if vmax == 0.0:
        return 0
    s = np.sign(v[np.abs(v) >= ZERO_FRACTION * vmax])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _finish(grid: RadialGrid, U: np.ndarray, n_charge: float) -> np.ndarray:
    norm2 = 4.0 * math.pi * grid.h * float(np.dot(U, U))
    U = U * math.sqrt(n_charge / norm2)
    first = U[np.nonzero(np.abs(U) > ZERO_FRACTION * np.max(np.abs(U)))[0][0]]
    return -U if first < 0 else U


def _check_extent(grid: RadialGrid, omega: float) -> None:
    kappa = math.sqrt(-2.0 * omega)
    if grid.r_max * kappa < DECAY_EFOLDS:
        warnings.warn(
            f"r_max*sqrt(-2 omega) = {grid.r_max * kappa:.3g} < {DECAY_EFOLDS:g}; "
            "increase r_max", ResolutionWarning, stacklevel=3)


def continuum_threshold(q: EffectivePotential) -> float:
    """Eigenvalues at or above this value count as continuum."""
    return -10.0 * np.finfo(float).eps * float(np.max(np.abs(q.q.values)))


def _tridiagonal(q: EffectivePotential):
    h = q.grid.h
    d = np.ascontiguousarray(1.0 / (h * h) + q.q.values)
    e = np.full(q.grid.n - 1, -0.5 / (h * h))
    return d, e


def solve_kth_matrix(q: EffectivePotential, k: int, n_charge: float) -> EigenPair:
    """k-th eigenpair of the finite-difference operator.

    Raises
    ------
    GridError
        "k exceeds grid resolution" when k >= n/4.
    NoBoundStateError
        "eigenvalue not below continuum" when fewer than k eigenvalues lie
        below the continuum threshold.
    """
    grid = q.grid
    if k < 1 or k >= grid.n / 4:
        raise GridError("k exceeds grid resolution")
    d, e = _tridiagonal(q)
    e2 = np.ascontiguousarray(e * e)
    top = continuum_threshold(q)
    if kernels.sturm_count(d, e2, top) < k:
        raise NoBoundStateError("eigenvalue not below continuum")
    lo = float(np.min(d)) - 2.0 * abs(e[0]) - 1.0
    omega = kernels.bisect_eigenvalue(d, e2, k - 1, lo, top, EIG_TOL)

    rng = np.random.default_rng(12345)
    x = rng.standard_normal(grid.n)
    sigma = omega + SHIFT
    for _ in range(MAX_INVERSE_ITER):
        x = kernels.solve_tridiagonal(d - sigma, e, x)
        x /= np.linalg.norm(x)
    Tx = d * x
    Tx[1:] += e * x[:-1]
    Tx[:-1] += e * x[1:]
    omega = float(np.dot(x, Tx))
    _check_extent(grid, omega)
    U = _finish(grid, x, n_charge)
    return EigenPair(omega, grid.field(U), count_nodes(U))


def _sample_smooth(q: EffectivePotential):
    """Smooth potential at the origin, the nodes and the half-steps."""
    s = q.smooth
    s0 = 4.0 * s[0] - 6.0 * s[1] + 4.0 * s[2] - s[3]
    sn = np.concatenate(([s0], s))
    mid = np.empty(len(s))
    mid[1:-1] = (-sn[:-3] + 9.0 * sn[1:-2] + 9.0 * sn[2:-1] - sn[3:]) / 16.0
    mid[0] = (5.0 * sn[0] + 15.0 * sn[1] - 5.0 * sn[2] + sn[3]) / 16.0
    mid[-1] = (sn[-4] - 5.0 * sn[-3] + 15.0 * sn[-2] + 5.0 * sn[-1]) / 16.0
    return np.ascontiguousarray(sn), np.ascontiguousarray(mid)


class _Shooter:
    def __init__(self, q: EffectivePotential, k: int):
        self.grid = q.grid
        self.z = q.z
        self.k = k
        self.s_nodes, self.s_mid = _sample_smooth(q)

    def steps(self, omega: float) -> int:
        kappa = math.sqrt(-2.0 * omega)
        m = int(round(min(self.grid.r_max, DECAY_EFOLDS / kappa) / self.grid.h))
        return min(max(m, 4), self.grid.n)

    def run(self, omega: float, store: bool = False, m: int | None = None):
        if m is None:
            m = self.steps(omega)
        return m, kernels.shoot(self.s_nodes, self.s_mid, self.z, self.grid.h,
                                omega, m, store)

    def above(self, omega: float) -> bool:
        """True when omega lies above the k-th eigenvalue."""
        _, (nodes, y, yp, _) = self.run(omega)
        if nodes != self.k - 1:
            return nodes >= self.k
        if y == 0.0:
            return True
        return yp / y + math.sqrt(-2.0 * omega) < 0.0

    def profile(self, lo: float, hi: float) -> tuple[int, np.ndarray]:
        """Eigenfunction on the first m nodes from the final bracket.

        A single trajectory at the converged omega still carries a growing
        exp(+kappa r) component of relative size ~ |omega error| e^{2 kappa r},
        which dominates near R_m. The two bracket trajectories carry that
        component with opposite signs; the combination whose log-derivative
        equals -kappa at R_m removes it.
        """
        omega = 0.5 * (lo + hi)
        kappa = math.sqrt(-2.0 * omega)
        m = self.steps(omega)
        _, (_, y_lo, yp_lo, t_lo) = self.run(lo, True, m)
        _, (_, y_hi, yp_hi, t_hi) = self.run(hi, True, m)
        miss_lo = yp_lo + kappa * y_lo
        miss_hi = yp_hi + kappa * y_hi
        if miss_hi == miss_lo:
            return m, t_hi
        a = miss_hi / (miss_hi - miss_lo)
        return m, a * t_lo + (1.0 - a) * t_hi


def default_bracket(q: EffectivePotential) -> tuple[float, float]:
    """Bracket containing every bound state of q."""
    s = q.smooth
    lo = -0.5 * q.z * q.z + min(float(np.min(s)), 0.0) - 1.0
    return lo, -1e-12


def solve_kth_shooting(q: EffectivePotential, k: int, n_charge: float,
                       bracket: tuple[float, float] | None = None) -> EigenPair:
    """k-th eigenpair by outward shooting and bisection.

    Parameters
    ----------
    q : EffectivePotential
    k : int
    n_charge : float
        Normalization 4 pi int U^2 dr.
    bracket : (float, float), optional
        Search interval (omega_lo, omega_hi) with omega_hi < 0. Defaults to
        an interval holding every bound state; in that case an empty search
        reports NoBoundStateError instead of BracketError.
    """
    grid = q.grid
    if k < 1 or k >= grid.n / 4:
        raise GridError("k exceeds grid resolution")
    explicit = bracket is not None
    lo, hi = bracket if explicit else default_bracket(q)
    if not (lo < hi < 0):
        raise BracketError("bracket must satisfy omega_lo < omega_hi < 0")
    sh = _Shooter(q, k)
    if sh.above(lo) or not sh.above(hi):
        if explicit:
            raise BracketError("bracket contains no k-th eigenvalue")
        raise NoBoundStateError("eigenvalue not below continuum")
    while hi - lo > EIG_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sh.above(mid):
            hi = mid
        else:
            lo = mid
    omega = 0.5 * (lo + hi)
    _check_extent(grid, omega)
    m, traj = sh.profile(lo, hi)
    U = np.empty(grid.n)
    U[:m] = traj
    if m < grid.n:
        kappa = math.sqrt(-2.0 * omega)
        U[m:] = traj[-1] * np.exp(-kappa * (grid.nodes[m:] - grid.nodes[m - 1]))
    U = _finish(grid, U, n_charge)
    return EigenPair(omega, grid.field(U), count_nodes(U))
