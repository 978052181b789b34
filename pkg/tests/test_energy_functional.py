import math

import numpy as np
import pytest

from sp_soliton.energy_functional import (evaluate, gradient, multiplier_residual,
                                          virial_residual)
from sp_soliton.errors import DegenerateStateWarning
from sp_soliton.radial_grid import ProblemSpec, build_grid
from sp_soliton.scf_solver import SolitonState

H1 = ProblemSpec(1.0, 1.0)


def random_smooth(r, rng, terms=6):
    f = np.zeros_like(r)
    for _ in range(terms):
        f += rng.standard_normal() * np.exp(-0.5 * ((r - rng.uniform(0, 6)) / rng.uniform(0.5, 2)) ** 2)
    return f * np.exp(-0.2 * r)


@pytest.fixture(scope="module")
def grid():
    return build_grid(4000, 40.0)


@pytest.fixture(scope="module")
def u1s(grid):
    return grid.field(np.exp(-grid.nodes) / math.sqrt(math.pi))


def test_zero_field(grid):
    e = evaluate(grid.field(np.zeros(grid.n)), H1)
    assert (e.kinetic, e.hartree, e.coulomb, e.total_j, e.rayleigh_omega) == (0, 0, 0, 0, 0)
    assert not gradient(grid.field(np.zeros(grid.n)), H1).values.any()


def test_hydrogenic_terms(u1s, oracle):
    e = evaluate(u1s, H1)
    assert abs(e.kinetic - oracle["kinetic_1s"]) <= 1e-4
    assert abs(e.hartree - oracle["hartree_1s_exact"]) <= 1e-4
    assert abs(e.coulomb - oracle["coulomb_1s"]) <= 1e-4
    assert abs(e.total_j + 3 / 32) <= 1e-4
    assert e.total_j == pytest.approx(e.kinetic + e.hartree - e.coulomb, rel=1e-12)


def test_no_nucleus_energy_positive(u1s):
    with pytest.warns(UserWarning):
        spec = ProblemSpec(0.0, 1.0)
    e = evaluate(u1s, spec)
    assert abs(e.total_j - 13 / 32) <= 1e-4
    assert e.coulomb == 0.0


def directional_fd(u, d, spec, eps=1e-5):
    jp = evaluate(u.with_values(u.values + eps * d), spec).total_j
    jm = evaluate(u.with_values(u.values - eps * d), spec).total_j
    return (jp - jm) / (2 * eps)


def test_gradient_matches_finite_differences(grid):
    rng = np.random.default_rng(11)
    r = grid.nodes
    u = grid.field(random_smooth(r, rng))
    g = gradient(u, H1).values
    for _ in range(5):
        d = random_smooth(r, rng)
        fd = directional_fd(u, d, H1)
        assert abs(grid.dot3d(g, d) - fd) / (1 + abs(fd)) <= 1e-6


def test_rayleigh_omega_is_gradient_projection(grid, u1s):
    e = evaluate(u1s, H1)
    g = gradient(u1s, H1).values
    n = grid.dot3d(u1s.values, u1s.values)
    assert e.rayleigh_omega == pytest.approx(grid.dot3d(g, u1s.values) / n, rel=1e-12)


def _trial_state(u, omega, spec):
    return SolitonState.from_field(u, omega, spec, 0, False)


def test_multiplier_identity_off_shell(u1s):
    # the identity is algebraic in T, E_H, C_V: with omega = <J'(u),u>/N it holds
    e = evaluate(u1s, H1)
    assert abs((2 * e.kinetic + 4 * e.hartree - 2 * e.coulomb) - 1 / 8) <= 1e-4
    assert abs((2 * e.total_j + 2 * e.hartree) - 1 / 8) <= 1e-4
    state = _trial_state(u1s, e.rayleigh_omega, H1)
    assert multiplier_residual(state) <= 1e-12


def test_virial_off_shell(u1s):
    state = _trial_state(u1s, -0.5, H1)
    e = state.energy
    assert abs((2 * e.kinetic + e.hartree - e.coulomb) - 5 / 32) <= 1e-4
    assert virial_residual(state) == pytest.approx((5 / 32) / (1 / 2 + 5 / 32 + 1 / 2), rel=1e-3)


def test_virial_hydrogen_limit(u1s):
    spec = ProblemSpec(1.0, 1e-8)
    u = u1s.with_values(u1s.values * 1e-4)
    assert virial_residual(_trial_state(u, -0.5, spec)) <= 1e-3


def test_virial_matches_dilation_derivative(neutral_state):
    # d/dlam J(lam^{3/2} u(lam r)) at lam = 1 from the terms: 2T + E_H - C_V
    e = neutral_state.energy
    lam = np.array([0.999, 1.001])
    j = lam**2 * e.kinetic + lam * e.hartree - lam * e.coulomb
    dj = (j[1] - j[0]) / 0.002
    assert abs(dj) / (2 * e.kinetic + e.hartree + e.coulomb) <= 1e-5
    assert virial_residual(neutral_state) <= 1e-5


def test_virial_numerical_dilation_oracle(neutral_state):
    # independent oracle: resample u_lam on the grid and difference J directly
    from scipy.interpolate import CubicSpline
    s = neutral_state
    r = s.grid.nodes
    spline = CubicSpline(np.concatenate(([0.0], r)),
                         np.concatenate(([s.u.values[0] + (s.u.values[0] - s.u.values[1])], s.u.values)))
    js = []
    for lam in (1 - 1e-3, 1 + 1e-3):
        u_lam = lam**1.5 * spline(np.minimum(lam * r, r[-1]))
        js.append(evaluate(s.grid.field(u_lam), s.spec).total_j)
    dj = (js[1] - js[0]) / 2e-3
    e = s.energy
    assert abs(dj) / (2 * e.kinetic + e.hartree + e.coulomb) <= 1e-4


def test_converged_multiplier(neutral_state):
    assert multiplier_residual(neutral_state) <= 1e-6


def test_zero_state_residuals_degenerate(grid):
    state = _trial_state(grid.field(np.zeros(grid.n)), 0.0, H1)
    with pytest.warns(DegenerateStateWarning):
        assert multiplier_residual(state) == 0.0
    with pytest.warns(DegenerateStateWarning):
        assert virial_residual(state) == 0.0
