"""Uniform radial grids, quadrature and norms for radial functions in 3D.

Nodes are r_i = i*h for i = 1..n with h = r_max/n; the origin is never a
node. Two quadratures are offered:

* ``RadialGrid.weights`` integrates a general f(r) over [0, r_max]. It
  uses end corrections so that polynomials up to degree two are exact
  (the origin value is extrapolated from the first nodes).
* ``RadialGrid.dot3d`` is the L2(R^3) inner product 4*pi*h*sum(f*g*r^2).
  The r^2 factor makes the integrand vanish at the origin like r^2, and
  fields are taken to vanish one step past r_max. The uniform sum is then
  the trapezoid rule, and it is the inner product under which the
  discrete operators in this package are symmetric.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .errors import GridError, SolitonError

_LEFT = np.array([13.0 / 6.0, 5.0 / 24.0, 1.0, 9.0 / 8.0])
_RIGHT = np.array([23.0 / 24.0, 7.0 / 6.0, 3.0 / 8.0])

MIN_NODES = 16


def _weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n)
    w[:4] = _LEFT
    w[-3:] = _RIGHT
    return w * h


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Uniform grid on (0, r_max].

    Attributes
    ----------
    n : int
        Number of nodes.
    r_max : float
        Outer truncation radius; equals the last node.
    h : float
        Spacing r_max / n.
    nodes : ndarray
        Radii h, 2h, ..., r_max.
    weights : ndarray
        Positive quadrature weights for integrals over [0, r_max].
    """

    n: int
    r_max: float
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < MIN_NODES:
            raise GridError(f"grid needs n >= {MIN_NODES} nodes, got {self.n}")
        if not (math.isfinite(self.r_max) and self.r_max > 0):
            raise GridError(f"r_max must be positive and finite, got {self.r_max}")
        n = int(self.n)
        h = float(self.r_max) / n
        nodes = h * np.arange(1, n + 1, dtype=float)
        nodes[-1] = float(self.r_max)
        weights = _weights(n, h)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r_max", float(self.r_max))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialGrid):
            return NotImplemented
        return self.n == other.n and self.r_max == other.r_max

    def __hash__(self) -> int:
        return hash((self.n, self.r_max))

    def dot3d(self, f: np.ndarray, g: np.ndarray) -> float:
        """L2(R^3) inner product of two radial sample arrays."""
        r = self.nodes
        return float(4.0 * math.pi * self.h * np.dot(f * r, g * r))

    def field(self, values) -> "RadialField":
        """Wrap an array as a field on this grid."""
        return RadialField(self, values)


@dataclass(frozen=True, eq=False)
class RadialField:
    """Real radial function sampled on a grid.

    Attributes
    ----------
    grid : RadialGrid
    values : ndarray
        Samples f(r_i); finite, one per node. Stored read-only.
    """

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise GridError(
                f"field has shape {v.shape}, grid expects ({self.grid.n},)")
        if not np.all(np.isfinite(v)):
            raise GridError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.grid.n

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def with_values(self, values) -> "RadialField":
        return RadialField(self.grid, values)


@dataclass(frozen=True)
class ProblemSpec:
    """Physical parameters of one solve.

    Attributes
    ----------
    z : float
        Nuclear charge, z >= 0.
    n_charge : float
        Total squared norm N > 0.
    k_index : int
        Branch index k >= 1 (the k-th state has k-1 radial nodes).
    """

    z: float
    n_charge: float
    k_index: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.z) and self.z >= 0):
            raise SolitonError(f"z must be >= 0, got {self.z}")
        if not (math.isfinite(self.n_charge) and self.n_charge > 0):
            raise SolitonError(f"n_charge must be > 0, got {self.n_charge}")
        if int(self.k_index) != self.k_index or self.k_index < 1:
            raise SolitonError(f"k_index must be a positive integer, got {self.k_index}")
        object.__setattr__(self, "k_index", int(self.k_index))
        if self.n_charge > self.z:
            warnings.warn(
                f"n_charge={self.n_charge} exceeds z={self.z}; "
                "outside the N <= z regime", stacklevel=3)


def build_grid(n: int, r_max: float) -> RadialGrid:
    """Uniform grid with n nodes on (0, r_max]."""
    return RadialGrid(n, r_max)


def _values(f) -> tuple[RadialGrid, np.ndarray]:
    return f.grid, f.values


def integrate(f: RadialField) -> float:
    """Quadrature of f over [0, r_max] with the grid weights."""
    grid, v = _values(f)
    return float(np.dot(grid.weights, v))


def l2_norm_3d(u: RadialField) -> float:
    """sqrt(4 pi int u^2 r^2 dr), the L2(R^3) norm of a radial function."""
    grid, v = _values(u)
    return math.sqrt(max(grid.dot3d(v, v), 0.0))


def normalize_to(u: RadialField, n_charge: float) -> RadialField:
    """Rescale u so that its squared 3D norm equals n_charge."""
    norm = l2_norm_3d(u)
    if norm == 0.0 or not math.isfinite(norm):
        raise SolitonError("cannot normalize zero function")
    return u.with_values(u.values * (math.sqrt(n_charge) / norm))
