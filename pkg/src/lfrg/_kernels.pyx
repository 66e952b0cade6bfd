# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of lfrg._kernels_py.

Same functions, same semantics, same constants; the pure-Python module is
the reference implementation and this one exists because these kernels sit
in the inner loop of every flow integration. Keep the two in lockstep.
"""

from libc.math cimport expm1, log, sqrt

import numpy as np

from .errors import ConvergenceError

BACKEND_NAME = "compiled"

RECURRENCE_CUTOFF = 10.0
BOSE_U_MAX = 50.0

cdef double _CUT = 10.0
cdef double _UMAX = 50.0

cdef double[8] _BERN
_BERN[0] = 1.0 / 6.0
_BERN[1] = -1.0 / 30.0
_BERN[2] = 1.0 / 42.0
_BERN[3] = -1.0 / 30.0
_BERN[4] = 5.0 / 66.0
_BERN[5] = -691.0 / 2730.0
_BERN[6] = 7.0 / 6.0
_BERN[7] = -3617.0 / 510.0

cdef double PI = 3.141592653589793238462643383279502884


cdef double _digamma(double x) nogil:
    cdef double acc = 0.0
    cdef double r, r2, val, t
    cdef int j
    while x < _CUT:
        acc -= 1.0 / x
        x += 1.0
    r = 1.0 / x
    r2 = r * r
    val = log(x) - 0.5 * r
    t = r2
    for j in range(8):
        val -= _BERN[j] / (2.0 * (j + 1)) * t
        t *= r2
    return acc + val


cdef double _trigamma(double x) nogil:
    cdef double acc = 0.0
    cdef double r, r2, val, t
    cdef int j
    while x < _CUT:
        acc += 1.0 / (x * x)
        x += 1.0
    r = 1.0 / x
    r2 = r * r
    val = r + 0.5 * r2
    t = r * r2
    for j in range(8):
        val += _BERN[j] * t
        t *= r2
    return acc + val


cdef double _tetragamma(double x) nogil:
    cdef double acc = 0.0
    cdef double r, r2, val, t
    cdef int j
    while x < _CUT:
        acc -= 2.0 / (x * x * x)
        x += 1.0
    r = 1.0 / x
    r2 = r * r
    val = -r2 - r * r2
    t = r2 * r2
    for j in range(8):
        val -= (2.0 * (j + 1) + 1.0) * _BERN[j] * t
        t *= r2
    return acc + val


def digamma(double x):
    """psi(x) for real x away from the poles at 0, -1, -2, ..."""
    return _digamma(x)


def trigamma(double x):
    """psi'(x) for real x away from the poles."""
    return _trigamma(x)


def tetragamma(double x):
    """psi''(x) for real x away from the poles."""
    return _tetragamma(x)


cdef double _bose_point(double u, double M2, double beta, int order) nogil:
    cdef double w2, mode
    if u == 0.0:
        if order == 0 and M2 == 0.0:
            return beta
        return 0.0
    w2 = u * u / (beta * beta) + M2
    if order == 0:
        mode = 1.0 / sqrt(w2)
    elif order == 1:
        mode = 1.0 / (w2 * sqrt(w2))
    else:
        mode = 1.0 / (w2 * w2 * sqrt(w2))
    return u * u * mode / expm1(u)


def bose_integral(double M2, double beta, int order, double rel_tol,
                  int max_panels):
    """Adaptive-Simpson Bose mode integral; see the pure twin's docstring."""
    cdef double pref, a, b, fa, fb, fm, whole, tol0, total, s
    cdef double a0, fa0, m0, fm0, b0, fb0, s0, tol, lm, rm, flm, frm, sl, sr, err
    cdef int panels = 0
    cdef int top = 0
    cdef int i
    cdef int n_seed = 16
    cdef double beta3 = beta * beta * beta

    if order == 0:
        pref = 1.0 / (2.0 * PI * PI * beta3)
    elif order == 1:
        pref = -1.0 / (4.0 * PI * PI * beta3)
    else:
        pref = 3.0 / (8.0 * PI * PI * beta3)

    # Seed with 16 uniform panels so the tolerance scale comes from a
    # composite estimate; a single Simpson over [0, 50] can miss the peak
    # of the integrand entirely and make the target absurdly tight.
    # Explicit stack; adaptive bisection never needs more than ~64 levels
    # before the interval width underflows, and each level pushes two frames.
    cdef double[:, ::1] stack = np.empty((4096, 8), dtype=np.float64)
    whole = 0.0
    for i in range(n_seed):
        a = _UMAX * i / n_seed
        b = _UMAX * (i + 1) / n_seed
        fa = _bose_point(a, M2, beta, order)
        fb = _bose_point(b, M2, beta, order)
        fm = _bose_point(0.5 * (a + b), M2, beta, order)
        s = (b - a) * (fa + 4.0 * fm + fb) / 6.0
        stack[i, 0] = a; stack[i, 1] = fa; stack[i, 2] = 0.5 * (a + b)
        stack[i, 3] = fm; stack[i, 4] = b; stack[i, 5] = fb; stack[i, 6] = s
        whole += s
    tol0 = rel_tol * max(abs(whole), 1e-300)
    for i in range(n_seed):
        stack[i, 7] = tol0 / n_seed
    top = n_seed
    total = 0.0

    while top > 0:
        top -= 1
        a0 = stack[top, 0]; fa0 = stack[top, 1]; m0 = stack[top, 2]
        fm0 = stack[top, 3]; b0 = stack[top, 4]; fb0 = stack[top, 5]
        s0 = stack[top, 6]; tol = stack[top, 7]
        lm = 0.5 * (a0 + m0)
        rm = 0.5 * (m0 + b0)
        flm = _bose_point(lm, M2, beta, order)
        frm = _bose_point(rm, M2, beta, order)
        sl = (m0 - a0) * (fa0 + 4.0 * flm + fm0) / 6.0
        sr = (b0 - m0) * (fm0 + 4.0 * frm + fb0) / 6.0
        err = sl + sr - s0
        panels += 1
        if abs(err) <= 15.0 * tol:
            total += sl + sr + err / 15.0
        else:
            if panels >= max_panels:
                raise ConvergenceError(
                    f"Bose quadrature did not meet rel_tol={rel_tol:g} within "
                    f"{max_panels} panels (M2={M2:g}, beta={beta:g}, order={order})")
            if top + 2 > stack.shape[0]:
                raise ConvergenceError("Bose quadrature stack overflow")
            stack[top, 0] = a0; stack[top, 1] = fa0; stack[top, 2] = lm
            stack[top, 3] = flm; stack[top, 4] = m0; stack[top, 5] = fm0
            stack[top, 6] = sl; stack[top, 7] = 0.5 * tol
            top += 1
            stack[top, 0] = m0; stack[top, 1] = fm0; stack[top, 2] = rm
            stack[top, 3] = frm; stack[top, 4] = b0; stack[top, 5] = fb0
            stack[top, 6] = sr; stack[top, 7] = 0.5 * tol
            top += 1
    return pref * total


cdef double _mink_pref(int d) nogil:
    if d == 2:
        return -1.0 / (2.0 * PI)
    elif d == 4:
        return 1.0 / (8.0 * PI * PI)
    return -1.0 / (64.0 * PI * PI * PI)


def wick_minkowski(double M2, double mu2, int d):
    """Renormalized vacuum Wick square in even-dimensional flat space."""
    cdef double md = 1.0
    if d == 4:
        md = M2
    elif d == 6:
        md = M2 * M2
    return _mink_pref(d) * md * log(M2 / mu2)


cdef double _wick_desitter(double M2, double H2, double xi, double log_mu) nogil:
    cdef double nu = sqrt(2.25 - 12.0 * xi + M2 / H2)
    cdef double bracket = M2 + 12.0 * (xi - 1.0 / 6.0) * H2
    cdef double psum = _digamma(1.5 + nu) + _digamma(1.5 - nu)
    return -(1.0 / (16.0 * PI * PI)) * (
        -2.0 * H2 / 3.0 + bracket * (psum + log_mu))


def wick_desitter(double M2, double H2, double xi, double log_mu):
    """Renormalized Bunch-Davies Wick square; log_mu = log(12 H^2 / mu^2)."""
    return _wick_desitter(M2, H2, xi, log_mu)


def wick_minkowski_arr(M2, double mu2, int d):
    """Vectorized wick_minkowski over an array of mass-squared values."""
    cdef double[::1] m2 = np.ascontiguousarray(M2, dtype=np.float64).ravel()
    out_np = np.empty(m2.shape[0], dtype=np.float64)
    cdef double[::1] out = out_np
    cdef double pref = _mink_pref(d)
    cdef Py_ssize_t i
    cdef double md
    with nogil:
        for i in range(m2.shape[0]):
            if d == 2:
                md = 1.0
            elif d == 4:
                md = m2[i]
            else:
                md = m2[i] * m2[i]
            out[i] = pref * md * log(m2[i] / mu2)
    return out_np.reshape(np.shape(M2))


def wick_thermal_arr(M2, double mu2, double beta, double rel_tol, int max_panels):
    """Vacuum-plus-Bose Wick square over an array of mass-squared values."""
    arr = np.ascontiguousarray(M2, dtype=np.float64)
    cdef double[::1] m2 = arr.ravel()
    out_np = np.empty(m2.shape[0], dtype=np.float64)
    cdef double[::1] out = out_np
    cdef double pref = _mink_pref(4)
    cdef Py_ssize_t i
    for i in range(m2.shape[0]):
        out[i] = pref * m2[i] * log(m2[i] / mu2) + bose_integral(
            m2[i], beta, 0, rel_tol, max_panels)
    return out_np.reshape(np.shape(M2))


def wick_desitter_arr(M2, double H2, double xi, double log_mu):
    """wick_desitter over an array of mass-squared values."""
    cdef double[::1] m2 = np.ascontiguousarray(M2, dtype=np.float64).ravel()
    out_np = np.empty(m2.shape[0], dtype=np.float64)
    cdef double[::1] out = out_np
    cdef Py_ssize_t i
    with nogil:
        for i in range(m2.shape[0]):
            out[i] = _wick_desitter(m2[i], H2, xi, log_mu)
    return out_np.reshape(np.shape(M2))
