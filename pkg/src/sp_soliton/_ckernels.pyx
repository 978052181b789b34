# cython: language_level=3
"""Compiled inner loops: Sturm counts, tridiagonal solves, RK4 shooting.

Signatures and semantics mirror ``_pykernels`` exactly; the test suite
checks the two against each other.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef double _RESCALE = 1e150


cdef Py_ssize_t _count(const double[::1] d, const double[::1] e2,
                       double sigma, double pivmin) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double q = d[0] - sigma
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - sigma - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def sturm_count(const double[::1] d, const double[::1] e2, double sigma,
                double pivmin=1e-300):
    """Number of eigenvalues of the tridiagonal matrix strictly below sigma."""
    cdef Py_ssize_t c
    with nogil:
        c = _count(d, e2, sigma, pivmin)
    return int(c)


def bisect_eigenvalue(const double[::1] d, const double[::1] e2,
                      Py_ssize_t index, double lo, double hi, double tol,
                      double pivmin=1e-300):
    """Bisect for the eigenvalue with 0-based position ``index``.

    Requires count(lo) <= index < count(hi).
    """
    cdef double mid
    with nogil:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _count(d, e2, mid, pivmin) > index:
                hi = mid
            else:
                lo = mid
    return 0.5 * (lo + hi)


def solve_tridiagonal(const double[::1] d, const double[::1] e,
                      const double[::1] rhs, double pivmin=1e-300):
    """Solve T x = rhs for symmetric tridiagonal T (diagonal d, off-diagonal e)."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_arr = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c_arr = np.empty(n)
    cdef double[::1] x = x_arr
    cdef double[::1] c = c_arr
    cdef double piv
    with nogil:
        piv = d[0]
        if fabs(piv) < pivmin:
            piv = pivmin
        c[0] = e[0] / piv if n > 1 else 0.0
        x[0] = rhs[0] / piv
        for i in range(1, n):
            piv = d[i] - e[i - 1] * c[i - 1]
            if fabs(piv) < pivmin:
                piv = pivmin
            if i < n - 1:
                c[i] = e[i] / piv
            x[i] = (rhs[i] - e[i - 1] * x[i - 1]) / piv
        for i in range(n - 2, -1, -1):
            x[i] -= c[i] * x[i + 1]
    return x_arr


cdef inline double _accel(double r, double y, double yp, double s,
                          double z, double omega) noexcept nogil:
    if r == 0.0:
        return -2.0 * z * yp
    return 2.0 * (s - z / r - omega) * y


def shoot(const double[::1] s_nodes, const double[::1] s_mid, double z,
          double h, double omega, Py_ssize_t m, bint store=False):
    """Integrate U'' = 2(s - z/r - omega) U outward from the origin.

    ``s_nodes[i]`` is the smooth potential at r = i*h (index 0 is the
    origin), ``s_mid[i]`` its value at (i + 1/2)*h.  Starts from the regular
    solution U(0) = 0, U'(0) = 1 and takes ``m`` RK4 steps.

    Returns (node_count, U(m*h), U'(m*h), trajectory or None).  The
    trajectory holds U at r = h..m*h.  Large amplitudes are rescaled, which
    leaves sign pattern and logarithmic derivative unchanged.
    """
    cdef Py_ssize_t i, j, nodes = 0
    cdef double y = 0.0, yp = 1.0, r, hh = 0.5 * h
    cdef double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p, yn, ypn, scale
    cdef cnp.ndarray[cnp.float64_t, ndim=1] traj_arr
    cdef double[::1] traj
    cdef int sign_prev = 1, sign_now
    if store:
        traj_arr = np.empty(m)
    else:
        traj_arr = np.empty(1)
    traj = traj_arr
    with nogil:
        for i in range(m):
            r = i * h
            k1y = yp
            k1p = _accel(r, y, yp, s_nodes[i], z, omega)
            k2y = yp + hh * k1p
            k2p = _accel(r + hh, y + hh * k1y, k2y, s_mid[i], z, omega)
            k3y = yp + hh * k2p
            k3p = _accel(r + hh, y + hh * k2y, k3y, s_mid[i], z, omega)
            k4y = yp + h * k3p
            k4p = _accel(r + h, y + h * k3y, k4y, s_nodes[i + 1], z, omega)
            yn = y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
            ypn = yp + h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
            y = yn
            yp = ypn
            if y != 0.0:
                sign_now = 1 if y > 0.0 else -1
                if sign_now != sign_prev:
                    nodes += 1
                    sign_prev = sign_now
            if fabs(y) > _RESCALE:
                scale = 1.0 / fabs(y)
                y *= scale
                yp *= scale
                if store:
                    for j in range(i):
                        traj[j] *= scale
            if store:
                traj[i] = y
    return int(nodes), y, yp, (traj_arr if store else None)
