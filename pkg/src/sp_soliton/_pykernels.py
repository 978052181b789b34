"""Pure-Python twins of the compiled kernels in ``_ckernels.pyx``.

Used when the extension is unavailable or when ``SP_SOLITON_PURE_PYTHON=1``.
"""
from __future__ import annotations

import math

import numpy as np

_RESCALE = 1e150


def _count(d, e2, sigma, pivmin):
    count = 0
    q = d[0] - sigma
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, len(d)):
        q = d[i] - sigma - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def sturm_count(d, e2, sigma, pivmin=1e-300):
    """Number of eigenvalues of the tridiagonal matrix strictly below sigma."""
    return _count(np.asarray(d, dtype=float).tolist(),
                  np.asarray(e2, dtype=float).tolist(), float(sigma), pivmin)


def bisect_eigenvalue(d, e2, index, lo, hi, tol, pivmin=1e-300):
    """Bisect for the eigenvalue with 0-based position ``index``."""
    dl = np.asarray(d, dtype=float).tolist()
    el = np.asarray(e2, dtype=float).tolist()
    lo, hi = float(lo), float(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _count(dl, el, mid, pivmin) > index:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def solve_tridiagonal(d, e, rhs, pivmin=1e-300):
    """Solve T x = rhs for symmetric tridiagonal T (diagonal d, off-diagonal e)."""
    d = np.asarray(d, dtype=float).tolist()
    e = np.asarray(e, dtype=float).tolist()
    rhs = np.asarray(rhs, dtype=float).tolist()
    n = len(d)
    c = [0.0] * n
    x = [0.0] * n
    piv = d[0]
    if abs(piv) < pivmin:
        piv = pivmin
    c[0] = e[0] / piv if n > 1 else 0.0
    x[0] = rhs[0] / piv
    for i in range(1, n):
        piv = d[i] - e[i - 1] * c[i - 1]
        if abs(piv) < pivmin:
            piv = pivmin
        if i < n - 1:
            c[i] = e[i] / piv
        x[i] = (rhs[i] - e[i - 1] * x[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        x[i] -= c[i] * x[i + 1]
    return np.array(x)


def _accel(r, y, yp, s, z, omega):
    if r == 0.0:
        return -2.0 * z * yp
    return 2.0 * (s - z / r - omega) * y


def shoot(s_nodes, s_mid, z, h, omega, m, store=False):
    """Integrate U'' = 2(s - z/r - omega) U outward from the origin.

    See the compiled twin for the argument conventions.
    """
    sn = np.asarray(s_nodes, dtype=float).tolist()
    sm = np.asarray(s_mid, dtype=float).tolist()
    z, h, omega = float(z), float(h), float(omega)
    hh = 0.5 * h
    y, yp = 0.0, 1.0
    nodes = 0
    sign_prev = 1
    traj = [0.0] * m if store else None
    for i in range(m):
        r = i * h
        k1y = yp
        k1p = _accel(r, y, yp, sn[i], z, omega)
        k2y = yp + hh * k1p
        k2p = _accel(r + hh, y + hh * k1y, k2y, sm[i], z, omega)
        k3y = yp + hh * k2p
        k3p = _accel(r + hh, y + hh * k2y, k3y, sm[i], z, omega)
        k4y = yp + h * k3p
        k4p = _accel(r + h, y + h * k3y, k4y, sn[i + 1], z, omega)
        y, yp = (y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0,
                 yp + h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0)
        if y != 0.0:
            sign_now = 1 if y > 0.0 else -1
            if sign_now != sign_prev:
                nodes += 1
                sign_prev = sign_now
        if math.fabs(y) > _RESCALE:
            scale = 1.0 / math.fabs(y)
            y *= scale
            yp *= scale
            if store:
                for j in range(i):
                    traj[j] *= scale
        if store:
            traj[i] = y
    return nodes, y, yp, (np.array(traj) if store else None)
