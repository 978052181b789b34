"""Numerical checks on a converged solitary wave.

Covers the Taylor behavior at the origin, the exponential tail, bounds on
V' = 4 pi int_r^inf U^2/t dt, polynomial-weight decay evidence and a local
uniqueness probe.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .errors import DegenerateStateWarning, SolitonError
from .radial_grid import l2_norm_3d, normalize_to
from .scf_solver import ScfConfig, SolitonState, solve

ORIGIN_NODES = 10
WINDOW_TOP = 1e-3
WINDOW_BOTTOM = 1e-8
SCHWARTZ_POWERS = (2, 4, 8)
ISOLATION_DU = 1e-6
ISOLATION_DOMEGA = 1e-8
DEFAULT_SEED = 20240917
_EPS = 1e-300


@dataclass(frozen=True)
class IsolationResult:
    """Outcome of re-solving from a perturbed ground state.

    ``passed`` is None when the state is not a ground state (k > 1), in
    which case the numbers are reported only.
    """

    du: float
    d_omega: float
    passed: bool | None
    noise_rel: float
    seed: int
    iterations: int


@dataclass(frozen=True)
class DiagnosticsReport:
    """All checks for one state.

    Attributes
    ----------
    a1, b1 : float
        U'(0) and V'(0) from quadratic fits at the origin.
    u2pp_check : float
        Relative defect of U''(0) = -2 z a1.
    decay_slope, decay_slope_expected : float
        Fitted and predicted (-sqrt(-2 omega)) tail rates.
    vprime_min, vprime_r2_max, far_charge : float
        min V', max of r^2 V' over r >= r_max/2, and V(r_max).
    schwartz_exponents : list of float
        Log-log tail slopes of r^n U^2 for n = 2, 4, 8 (neutral states only).
    isolation : IsolationResult or None
    """

    a1: float
    b1: float
    u2pp_check: float
    decay_slope: float
    decay_slope_expected: float
    vprime_min: float
    vprime_r2_max: float
    far_charge: float
    schwartz_exponents: list = field(default_factory=list)
    isolation: IsolationResult | None = None


def _origin_fit(r: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    A = np.column_stack((r, r * r))
    (c1, c2), *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(c1), float(c2)


def origin_expansion(state: SolitonState) -> tuple[float, float, float]:
    """(a1, b1, u2pp_check) from least-squares fits c1 r + c2 r^2."""
    r = state.grid.nodes[:ORIGIN_NODES]
    a1, a2 = _origin_fit(r, state.U.values[:ORIGIN_NODES])
    b1, _ = _origin_fit(r, state.Vred.values[:ORIGIN_NODES])
    upp = 2.0 * a2
    balance = 2.0 * state.spec.z * a1
    check = abs(upp + balance) / (abs(upp) + abs(balance) + _EPS)
    return a1, b1, check


def tail_window(U: np.ndarray) -> np.ndarray:
    """Indices past the outermost lobe where |U|/max lies in [1e-8, 1e-3]."""
    a = np.abs(U)
    amax = float(np.max(a)) if a.size else 0.0
    if amax == 0.0:
        return np.zeros(0, dtype=int)
    start = int(np.nonzero(a >= WINDOW_TOP * amax)[0][-1]) + 1
    idx = np.arange(start, len(a))
    return idx[a[idx] >= WINDOW_BOTTOM * amax]


def decay_fit(state: SolitonState) -> tuple[float, float]:
    """(fitted slope, -sqrt(-2 omega)) of the exponential tail.

    With residual charge Z = z - V(r_max) the tail is r^(Z/kappa) e^{-kappa r};
    the power is removed before the linear fit so that charged and neutral
    states are treated alike.
    """
    if not state.omega < 0:
        raise SolitonError("decay fit needs omega < 0")
    kappa = math.sqrt(-2.0 * state.omega)
    idx = tail_window(state.U.values)
    if idx.size < 3:
        raise SolitonError("window empty: increase r_max")
    r = state.grid.nodes[idx]
    z_tail = state.spec.z - float(state.Vred.values[-1])
    y = np.log(np.abs(state.U.values[idx])) - (z_tail / kappa) * np.log(r)
    slope = float(np.polyfit(r, y, 1)[0])
    return slope, -kappa


def vprime(state: SolitonState) -> np.ndarray:
    """V'(r) = 4 pi int_r^r_max U^2/t dt by the trapezoid rule."""
    g = state.grid
    f = state.U.values ** 2 / g.nodes
    inc = 0.5 * g.h * (f[1:] + f[:-1])
    tail = np.zeros(g.n)
    tail[:-1] = np.cumsum(inc[::-1])[::-1]
    return 4.0 * math.pi * tail


def v_bounds(state: SolitonState) -> tuple[float, float, float]:
    """(min V', max_{r >= r_max/2} r^2 V', V(r_max))."""
    g = state.grid
    vp = vprime(state)
    outer = g.nodes >= 0.5 * g.r_max
    r2vp = float(np.max(g.nodes[outer] ** 2 * vp[outer]))
    return float(np.min(vp)), r2vp, float(state.Vred.values[-1])


def schwartz_probe(state: SolitonState) -> list[float]:
    """Tail log-log slopes of r^n U^2 for n in (2, 4, 8).

    Negative slopes mean r^n U^2 is still decreasing over the tail window.
    Only defined for neutral states (N = z).
    """
    spec = state.spec
    if not math.isclose(spec.n_charge, spec.z, rel_tol=1e-9):
        raise SolitonError("requires N = z")
    idx = tail_window(state.U.values)
    if idx.size < 3:
        raise SolitonError("window empty: increase r_max")
    logr = np.log(state.grid.nodes[idx])
    logu2 = 2.0 * np.log(np.abs(state.U.values[idx]))
    return [float(np.polyfit(logr, n * logr + logu2, 1)[0]) for n in SCHWARTZ_POWERS]


def smooth_noise(r: np.ndarray, rng: np.random.Generator, terms: int = 8) -> np.ndarray:
    """Random sum of Gaussian bumps in r."""
    scale = float(r[-1])
    eta = np.zeros_like(r)
    for _ in range(terms):
        c = rng.standard_normal()
        mu = rng.uniform(0.0, min(10.0, scale))
        width = rng.uniform(0.5, 3.0)
        eta += c * np.exp(-0.5 * ((r - mu) / width) ** 2)
    return eta


def isolation_probe(state: SolitonState, cfg: ScfConfig | None = None,
                    noise_rel: float = 0.01,
                    seed: int = DEFAULT_SEED) -> IsolationResult:
    """Perturb u by smooth noise of relative size noise_rel and re-solve.

    Passes when the new solution is within 1e-6 in L2 and 1e-8 in omega.
    """
    cfg = cfg or ScfConfig()
    u = state.u
    eta = smooth_noise(state.grid.nodes, np.random.default_rng(seed))
    norm_eta = l2_norm_3d(u.with_values(eta))
    delta = noise_rel * l2_norm_3d(u) / norm_eta * eta if noise_rel > 0 else 0.0 * eta
    start = normalize_to(u.with_values(u.values + delta), state.spec.n_charge)
    new = solve(state.spec, cfg, initial=start)
    du = l2_norm_3d(u.with_values(new.u.values - u.values))
    d_omega = abs(new.omega - state.omega)
    passed = None
    if state.k_index == 1:
        passed = bool(du <= ISOLATION_DU and d_omega <= ISOLATION_DOMEGA)
    return IsolationResult(du, d_omega, passed, noise_rel, seed, new.iterations)


def diagnose(state: SolitonState, isolation: bool = False,
             cfg: ScfConfig | None = None, seed: int = DEFAULT_SEED) -> DiagnosticsReport:
    """Run every check; the isolation probe only when requested."""
    if l2_norm_3d(state.u) == 0.0:
        warnings.warn("diagnostics on a zero state", DegenerateStateWarning, stacklevel=2)
    a1, b1, check = origin_expansion(state)
    slope, expected = decay_fit(state)
    vmin, r2max, charge = v_bounds(state)
    spec = state.spec
    exponents = (schwartz_probe(state)
                 if math.isclose(spec.n_charge, spec.z, rel_tol=1e-9) else [])
    iso = isolation_probe(state, cfg, seed=seed) if isolation else None
    return DiagnosticsReport(a1, b1, check, slope, expected, vmin, r2max, charge,
                             exponents, iso)
