"""Pure-Python reference implementation of the numerical hot kernels.

These functions sit in the inner loop of every flow integration: each
right-hand-side evaluation of a coupling flow calls the coincidence-limit
kernels once, and a method-of-lines potential flow calls them once per grid
node per stage. lfrg._kernels is a compiled twin of this module with
identical signatures and semantics; lfrg._backend picks whichever is
available at import time.

Everything here assumes validated input (positive masses where required,
polygamma arguments away from poles). Argument checking and error mapping
live in the public wrapper modules.
"""

import math

import numpy as np

from .errors import ConvergenceError

BACKEND_NAME = "python"

# Polygamma: upward recurrence below this threshold, Bernoulli asymptotics above.
RECURRENCE_CUTOFF = 10.0

# Bernoulli numbers B_2, B_4, ..., B_16 (8 terms of the asymptotic tail).
_BERN = (
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0,
)

# Truncation point of the Bose integral in u = beta*p; exp(-50) < 2e-22.
BOSE_U_MAX = 50.0


def digamma(x):
    """psi(x) for real x away from the poles at 0, -1, -2, ..."""
    acc = 0.0
    while x < RECURRENCE_CUTOFF:
        acc -= 1.0 / x
        x += 1.0
    r = 1.0 / x
    r2 = r * r
    val = math.log(x) - 0.5 * r
    t = r2
    for j, b in enumerate(_BERN):
        # B_2j / (2j x^(2j))
        val -= b / (2.0 * (j + 1)) * t
        t *= r2
    return acc + val


def trigamma(x):
    """psi'(x) for real x away from the poles."""
    acc = 0.0
    while x < RECURRENCE_CUTOFF:
        acc += 1.0 / (x * x)
        x += 1.0
    r = 1.0 / x
    r2 = r * r
    val = r + 0.5 * r2
    t = r * r2
    for b in _BERN:
        val += b * t
        t *= r2
    return acc + val


def tetragamma(x):
    """psi''(x) for real x away from the poles."""
    acc = 0.0
    while x < RECURRENCE_CUTOFF:
        acc -= 2.0 / (x * x * x)
        x += 1.0
    r = 1.0 / x
    r2 = r * r
    val = -r2 - r * r2
    t = r2 * r2
    for j, b in enumerate(_BERN):
        val -= (2.0 * (j + 1) + 1.0) * b * t
        t *= r2
    return acc + val


def _bose_point(u, M2, beta, order):
    """Integrand of the Bose mode integral in u = beta*p, without prefactor."""
    if u == 0.0:
        if order == 0 and M2 == 0.0:
            return beta
        return 0.0
    w2 = u * u / (beta * beta) + M2
    if order == 0:
        mode = 1.0 / math.sqrt(w2)
    elif order == 1:
        mode = w2 ** -1.5
    else:
        mode = w2 ** -2.5
    return u * u * mode / math.expm1(u)


def bose_integral(M2, beta, order, rel_tol, max_panels):
    """Semi-infinite Bose-Einstein mode integral and its first two
    mass-squared derivatives.

    order 0:  (1/2 pi^2) int_0^inf dp p^2 (p^2+M2)^(-1/2) / (e^(beta p) - 1)
    order 1:  d/dM2 of the above  (requires M2 > 0)
    order 2:  d^2/dM2^2            (requires M2 > 0)

    Computed by adaptive Simpson quadrature on u = beta*p over [0, BOSE_U_MAX],
    with the local Richardson error estimate accepted at 15x the bisected
    tolerance. Raises ConvergenceError when the subdivision budget is spent.
    """
    beta3 = beta ** 3
    if order == 0:
        pref = 1.0 / (2.0 * math.pi ** 2 * beta3)
    elif order == 1:
        pref = -1.0 / (4.0 * math.pi ** 2 * beta3)
    else:
        pref = 3.0 / (8.0 * math.pi ** 2 * beta3)

    # Seed with 16 uniform panels so the tolerance scale comes from a
    # composite estimate; a single Simpson over [0, 50] can miss the peak
    # of the integrand entirely and make the target absurdly tight.
    n_seed = 16
    edges = [BOSE_U_MAX * i / n_seed for i in range(n_seed + 1)]
    fvals = [_bose_point(u, M2, beta, order) for u in edges]
    seeds = []
    whole = 0.0
    for i in range(n_seed):
        a, b = edges[i], edges[i + 1]
        fm = _bose_point(0.5 * (a + b), M2, beta, order)
        s = (b - a) * (fvals[i] + 4.0 * fm + fvals[i + 1]) / 6.0
        seeds.append((a, fvals[i], 0.5 * (a + b), fm, b, fvals[i + 1], s))
        whole += s
    tol0 = rel_tol * max(abs(whole), 1e-300)

    total = 0.0
    panels = 0
    stack = [(*seed, tol0 / n_seed) for seed in seeds]
    while stack:
        a0, fa0, m0, fm0, b0, fb0, s0, tol = stack.pop()
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
            half = 0.5 * tol
            stack.append((a0, fa0, lm, flm, m0, fm0, sl, half))
            stack.append((m0, fm0, rm, frm, b0, fb0, sr, half))
    return pref * total


# Prefactor of the even-dimensional vacuum Wick square: 2 (-1)^(d/2) / (Gamma(d/2) (4 pi)^(d/2)).
_MINK_PREF = {
    2: -1.0 / (2.0 * math.pi),
    4: 1.0 / (8.0 * math.pi ** 2),
    6: -1.0 / (64.0 * math.pi ** 3),
}


def wick_minkowski(M2, mu2, d):
    """Renormalized vacuum Wick square in even-dimensional flat space."""
    return _MINK_PREF[d] * M2 ** (d // 2 - 1) * math.log(M2 / mu2)


def wick_desitter(M2, H2, xi, log_mu):
    """Renormalized Bunch-Davies Wick square; log_mu = log(12 H^2 / mu^2)."""
    nu = math.sqrt(2.25 - 12.0 * xi + M2 / H2)
    bracket = M2 + 12.0 * (xi - 1.0 / 6.0) * H2
    psum = digamma(1.5 + nu) + digamma(1.5 - nu)
    return -(1.0 / (16.0 * math.pi ** 2)) * (
        -2.0 * H2 / 3.0 + bracket * (psum + log_mu))


def wick_minkowski_arr(M2, mu2, d):
    """Vectorized wick_minkowski over an array of mass-squared values."""
    M2 = np.asarray(M2, dtype=float)
    return _MINK_PREF[d] * M2 ** (d // 2 - 1) * np.log(M2 / mu2)


def wick_thermal_arr(M2, mu2, beta, rel_tol, max_panels):
    """Vacuum-plus-Bose Wick square over an array of mass-squared values."""
    M2 = np.asarray(M2, dtype=float)
    out = _MINK_PREF[4] * M2 * np.log(M2 / mu2)
    flat = M2.ravel()
    add = np.empty(flat.shape, dtype=float)
    for i, m2 in enumerate(flat):
        add[i] = bose_integral(m2, beta, 0, rel_tol, max_panels)
    return out + add.reshape(M2.shape)


def wick_desitter_arr(M2, H2, xi, log_mu):
    """wick_desitter over an array of mass-squared values."""
    M2 = np.asarray(M2, dtype=float)
    flat = M2.ravel()
    out = np.empty(flat.shape, dtype=float)
    for i, m2 in enumerate(flat):
        out[i] = wick_desitter(m2, H2, xi, log_mu)
    return out.reshape(M2.shape)
