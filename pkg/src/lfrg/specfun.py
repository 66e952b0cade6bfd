"""Special functions and quadrature shared by all source kernels.

Polygamma functions of orders 0-2 (digamma, trigamma, tetragamma), the
Riemann zeta value at 3, and the semi-infinite Bose-Einstein tadpole
integral. The polygamma functions use the upward recurrence

    psi^(n)(x+1) = psi^(n)(x) + (-1)^n n! / x^(n+1)

to push the argument above 10 and then an 8-term Bernoulli asymptotic
series, which keeps the relative error comfortably below 1e-13 on
[1e-3, 1e3]. Negative non-integer arguments are reached by the same
recurrence; the poles at the non-positive integers raise PoleError.

All functions are pure and safe to call concurrently.
"""

import math

from ._backend import kernels
from .errors import ConvergenceError, DomainError, PoleError

__all__ = ["polygamma", "zeta3", "bose_tadpole", "bose_tadpole_derivative"]

# zeta(3), stored to full double precision; appears as a literal in the
# high-temperature flow and in test identities.
_ZETA3 = 1.2020569031595942854

# Arguments this close to a non-positive integer are treated as on-pole.
_POLE_EPS = 1e-12


def _check_pole(x):
    if x <= 0.5 and abs(x - round(x)) < _POLE_EPS:
        raise PoleError(f"polygamma argument {x!r} is at a non-positive integer pole")


def polygamma(order, x):
    """psi^(order)(x) for order in {0, 1, 2} and real non-pole x.

    Parameters
    ----------
    order : int
        0 for the digamma function, 1 for trigamma, 2 for tetragamma.
    x : float
        Any real number that is not zero or a negative integer.

    Raises
    ------
    PoleError
        If x is (numerically) a non-positive integer.
    DomainError
        If order is not 0, 1 or 2, or x is not finite.
    """
    if order not in (0, 1, 2):
        raise DomainError(f"polygamma order must be 0, 1 or 2, got {order!r}")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"polygamma argument must be finite, got {x!r}")
    _check_pole(x)
    if order == 0:
        return kernels.digamma(x)
    if order == 1:
        return kernels.trigamma(x)
    return kernels.tetragamma(x)


def zeta3():
    """Riemann zeta(3) = 1.2020569..., as a stored constant."""
    return _ZETA3


def _check_bose_args(M2, beta):
    if not (beta > 0.0):
        raise DomainError(f"inverse temperature must be positive, got beta={beta!r}")
    if M2 < 0.0:
        raise DomainError(f"mass squared must be non-negative, got M2={M2!r}")


def bose_tadpole(M2, beta, rel_tol=1e-10, max_panels=10_000):
    """Thermal part of the coincidence-limit Wick square.

    Evaluates

        (1 / 2 pi^2) int_0^inf dp  p^2 / sqrt(p^2 + M2) / (e^(beta p) - 1)

    by adaptive quadrature on u = beta*p over [0, 50] (the discarded tail is
    below e^-50). The Bose factor carries the massless frequency |p|; the
    mode factor carries the full sqrt(p^2 + M2). M2 = 0 is allowed, where
    the closed form 1/(12 beta^2) holds.

    Raises DomainError for beta <= 0 or M2 < 0 and ConvergenceError if the
    subdivision budget is exhausted before rel_tol is met.
    """
    _check_bose_args(M2, beta)
    return kernels.bose_integral(float(M2), float(beta), 0, rel_tol, max_panels)


def bose_tadpole_derivative(M2, beta, order=1, rel_tol=1e-10, max_panels=50_000):
    """First or second M2-derivative of bose_tadpole, as a quadrature.

    Used by the transcribed exact thermal flow; order 1 and 2 need M2 > 0
    because the derivative integrands are singular at vanishing mass. The
    default subdivision budget is larger than bose_tadpole's: the
    derivative integrands concentrate near u ~ beta*sqrt(M2) and need deep
    refinement when beta is small.
    """
    if order not in (1, 2):
        raise DomainError(f"derivative order must be 1 or 2, got {order!r}")
    _check_bose_args(M2, beta)
    if M2 == 0.0:
        raise DomainError("bose_tadpole_derivative requires M2 > 0")
    return kernels.bose_integral(float(M2), float(beta), order, rel_tol, max_panels)
