import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sp_soliton.errors import GridError, SolitonError
from sp_soliton.radial_grid import (ProblemSpec, RadialField, build_grid, integrate,
                                    l2_norm_3d, normalize_to)


def test_uniform_nodes():
    g = build_grid(16, 8.0)
    assert g.h == 0.5
    np.testing.assert_allclose(g.nodes, 0.5 * np.arange(1, 17))
    assert g.nodes[-1] == 8.0


def test_weights_sum_to_r_max():
    g = build_grid(16, 8.0)
    assert np.all(g.weights > 0)
    assert abs(g.weights.sum() - 8.0) <= 1e-12 * 8.0


@pytest.mark.parametrize("n, r_max", [(4, 4.0), (15, 1.0), (16, 0.0), (16, -1.0),
                                      (16, math.inf)])
def test_rejects_bad_grids(n, r_max):
    with pytest.raises(GridError):
        build_grid(n, r_max)


def test_field_invariants():
    g = build_grid(16, 1.0)
    with pytest.raises(GridError):
        RadialField(g, np.ones(15))
    with pytest.raises(GridError):
        RadialField(g, np.full(16, np.nan))
    f = g.field(np.ones(16))
    with pytest.raises(ValueError):
        f.values[0] = 2.0


def test_integrate_zero():
    g = build_grid(100, 5.0)
    assert integrate(g.field(np.zeros(g.n))) == 0.0


def test_integrate_gamma_oracles(oracle):
    g = build_grid(2000, 30.0)
    r = g.nodes
    assert abs(integrate(g.field(r**2 * np.exp(-2 * r))) - oracle["int_r2_exp_m2r"]) <= 1e-6
    assert abs(integrate(g.field(r * np.exp(-2 * r))) - oracle["int_r_exp_m2r"]) <= 1e-6


def test_integrate_exponential(oracle):
    g = build_grid(4000, 40.0)
    assert abs(integrate(g.field(np.exp(-g.nodes))) - oracle["int_exp_mr"]) <= 1e-6


@settings(max_examples=50, deadline=None)
@given(a=st.floats(-10, 10), b=st.floats(-10, 10),
       n=st.integers(16, 500), r_max=st.floats(0.1, 100))
def test_affine_exact(a, b, n, r_max):
    g = build_grid(n, r_max)
    exact = a * r_max + 0.5 * b * r_max**2
    got = integrate(g.field(a + b * g.nodes))
    assert abs(got - exact) <= 1e-12 * (abs(a) * r_max + abs(b) * r_max**2 + 1e-300)


def test_second_order_convergence():
    errs = []
    for n in (200, 400, 800):
        g = build_grid(n, 30.0)
        errs.append(abs(integrate(g.field(g.nodes**2 * np.exp(-2 * g.nodes))) - 0.25))
    assert errs[0] / errs[1] >= 3.8
    assert errs[1] / errs[2] >= 3.8


def test_l2_norm(oracle):
    g = build_grid(4000, 40.0)
    r = g.nodes
    assert l2_norm_3d(g.field(np.zeros(g.n))) == 0.0
    assert abs(l2_norm_3d(g.field(np.exp(-r) / math.sqrt(math.pi))) - 1.0) <= 1e-6
    assert abs(l2_norm_3d(g.field(2 * np.exp(-r))) - oracle["norm_2exp_dense"]) <= 1e-6


def test_normalize_to():
    # default spacing h = 0.002; the 1s profile is normalized there to 5e-13
    g = build_grid(20000, 40.0)
    r = g.nodes
    u1s = g.field(np.exp(-r) / math.sqrt(math.pi))
    once = normalize_to(u1s, 1.0)
    np.testing.assert_allclose(once.values, u1s.values, rtol=0, atol=1e-12)
    np.testing.assert_allclose(normalize_to(g.field(np.exp(-r)), 1.0).values,
                               u1s.values, rtol=0, atol=1e-9)
    twice = normalize_to(once, 1.0)
    np.testing.assert_allclose(twice.values, once.values, rtol=1e-12, atol=0)
    assert abs(l2_norm_3d(normalize_to(u1s, 3.0)) ** 2 - 3.0) <= 1e-12


def test_normalize_zero_fails():
    g = build_grid(16, 1.0)
    with pytest.raises(SolitonError, match="cannot normalize zero function"):
        normalize_to(g.field(np.zeros(16)), 1.0)


def test_problem_spec_validation():
    with pytest.warns(UserWarning, match="exceeds"):
        ProblemSpec(1.0, 2.0)
    with pytest.raises(SolitonError):
        ProblemSpec(-1.0, 1.0)
    with pytest.raises(SolitonError):
        ProblemSpec(1.0, 0.0)
    with pytest.raises(SolitonError):
        ProblemSpec(1.0, 1.0, 0)
