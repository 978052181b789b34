"""Regenerate tests/oracles/values.json from independent references.

Nothing here imports the package under test. Closed forms come from sympy,
the Hartree self-energy from scipy double quadrature over the max kernel,
and grid-free references from scipy.integrate.quad.

Run from the repository root:  python tests/oracles/generate.py
"""
import json
import math
from pathlib import Path

import numpy as np
import sympy as sp
from scipy import integrate
from scipy.linalg import eigh_tridiagonal

r, p = sp.symbols("r p", positive=True)
out = {}

out["int_r2_exp_m2r"] = float(sp.integrate(r**2 * sp.exp(-2 * r), (r, 0, sp.oo)))
out["int_r_exp_m2r"] = float(sp.integrate(r * sp.exp(-2 * r), (r, 0, sp.oo)))
out["int_exp_mr"] = float(sp.integrate(sp.exp(-r), (r, 0, sp.oo)))

# inverse Laplacian of exp(-2p): -(1/r) int_0^r p^2 v - int_r^oo p v
w = -(sp.integrate(p**2 * sp.exp(-2 * p), (p, 0, r)) / r
      + sp.integrate(p * sp.exp(-2 * p), (p, r, sp.oo)))
w = sp.simplify(w)
out["poisson_exp_m2r_expr"] = str(w)
sample_r = [0.5, 1.0, 2.0, 5.0, 10.0]
out["poisson_exp_m2r_samples"] = {str(x): float(w.subs(r, x)) for x in sample_r}

# 1s: u = exp(-r)/sqrt(pi); phi = 4 pi w(u^2)
u2 = sp.exp(-2 * r) / sp.pi
phi = 4 * sp.pi * -(sp.integrate((p**2 * u2.subs(r, p)), (p, 0, r)) / r
                    + sp.integrate(p * u2.subs(r, p), (p, r, sp.oo)))
phi = sp.simplify(phi)
out["phi_1s_expr"] = str(phi)
out["phi_1s_samples"] = {str(x): float(phi.subs(r, x)) for x in sample_r}

# Hartree self-energy of the 1s density by double quadrature over the
# kernel 1/max(r, p): E_H = pi * int int rho(x) rho(y) / |x-y|, radial form
# (4 pi)^2 int int rho(r) rho(p) r^2 p^2 / max(r, p) dr dp, times 1/4.
def rho(x):
    return math.exp(-2 * x) / math.pi

val, _ = integrate.dblquad(
    lambda y, x: rho(x) * rho(y) * x * x * y * y / max(x, y),
    0, 40, 0, 40, epsabs=1e-13, epsrel=1e-12)
coulomb_self = (4 * math.pi) ** 2 * val
out["hartree_1s_quadrature"] = 0.25 * coulomb_self
out["hartree_1s_exact"] = float(sp.Rational(5, 32))

# hydrogen expectation values of the 1s state
U = r * sp.exp(-r) / sp.sqrt(sp.pi)
out["kinetic_1s"] = float(sp.pi * sp.integrate(sp.diff(U, r) ** 2, (r, 0, sp.oo)))
out["coulomb_1s"] = float(2 * sp.pi * sp.integrate(U**2 / r, (r, 0, sp.oo)))

# norm of 2 exp(-r) by brute-force dense quadrature (trapezoid on 400k points)
x = np.linspace(0.0, 40.0, 400001)
f = 4 * np.pi * (2 * np.exp(-x)) ** 2 * x**2
out["norm_2exp_dense"] = float(np.sqrt(np.trapezoid(f, x)))

# hydrogen spectrum
out["hydrogen_omega"] = {str(k): -0.5 / k**2 for k in (1, 2, 3)}
# first-order perturbation with the 5/8 self-energy integral
out["perturbative_omega_N001"] = -0.5 + 0.625 * 0.01

# scipy reference for the finite-difference hydrogen matrix (h = 0.01, r_max = 40)
n, h = 4000, 0.01
rr = h * np.arange(1, n + 1)
d = 1.0 / h**2 - 1.0 / rr
e = np.full(n - 1, -0.5 / h**2)
vals = eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, 2))
out["fd_hydrogen_h001_rmax40"] = [float(v) for v in vals]

path = Path(__file__).with_name("values.json")
path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
print(json.dumps(out, indent=2, sort_keys=True))
