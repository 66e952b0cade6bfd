"""Independent slow oracles used to freeze and check expected values.

Everything here is deliberately naive: partial sums with Richardson
acceleration for the polygamma family, composite Simpson with a huge panel
count for the Bose integral. None of it shares code with the library
implementations it checks.
"""

import numpy as np

EULER_GAMMA = 0.57721566490153286060


def _richardson(sums, p0):
    """Extrapolate partial sums at N, 2N, 4N, ... whose error is a series
    in 1/N starting at power p0: level i cancels the 1/N^(p0+i) term."""
    row = list(sums)
    p = p0
    while len(row) > 1:
        w = 2.0 ** p
        row = [(w * b - a) / (w - 1.0) for a, b in zip(row, row[1:])]
        p += 1
    return row[0]


def _base_count(x):
    # the 1/N error expansion carries x-dependent coefficients, so large
    # arguments need proportionally longer partial sums
    return int((1 << 16) * max(1.0, abs(x) / 50.0))


def digamma_series(x, n0=None):
    """psi(x) = -gamma + sum_j (1/(j+1) - 1/(j+x)), Richardson accelerated."""
    n0 = n0 or _base_count(x)
    sums = []
    for mult in (1, 2, 4, 8):
        j = np.arange(n0 * mult, dtype=float)
        sums.append(float(np.sum(1.0 / (j + 1.0) - 1.0 / (j + x))))
    return -EULER_GAMMA + _richardson(sums, 1)


def trigamma_series(x, n0=None):
    """psi'(x) = sum_j 1/(j+x)^2, Richardson accelerated."""
    n0 = n0 or _base_count(x)
    sums = []
    for mult in (1, 2, 4, 8):
        j = np.arange(n0 * mult, dtype=float)
        sums.append(float(np.sum(1.0 / (j + x) ** 2)))
    return _richardson(sums, 1)


def tetragamma_series(x, n0=None):
    """psi''(x) = -2 sum_j 1/(j+x)^3, Richardson accelerated (tail ~ 1/N^2)."""
    n0 = n0 or _base_count(x)
    sums = []
    for mult in (1, 2, 4, 8):
        j = np.arange(n0 * mult, dtype=float)
        sums.append(float(-2.0 * np.sum(1.0 / (j + x) ** 3)))
    return _richardson(sums, 2)


def zeta3_partial_sum_bounds(n=10 ** 6):
    """Bracket zeta(3) by the partial sum plus integral tail bounds."""
    j = np.arange(1, n + 1, dtype=float)
    s = float(np.sum(j ** -3))
    lo = s + 1.0 / (2.0 * (n + 1) ** 2)
    hi = s + 1.0 / (2.0 * n ** 2)
    return lo, hi


def bose_tadpole_simpson(M2, beta, n_panels=10 ** 6, u_max=50.0):
    """Composite Simpson for the Bose tadpole on u = beta*p in [0, u_max]."""
    u = np.linspace(0.0, u_max, 2 * n_panels + 1)
    f = np.zeros_like(u)
    w = u[1:] ** 2 / np.sqrt(u[1:] ** 2 / beta ** 2 + M2)
    f[1:] = w / np.expm1(u[1:])
    if M2 == 0.0:
        f[0] = beta
    h = u[1] - u[0]
    total = (f[0] + f[-1] + 4.0 * f[1::2].sum() + 2.0 * f[2:-1:2].sum()) * h / 3.0
    return total / (2.0 * np.pi ** 2 * beta ** 3)
