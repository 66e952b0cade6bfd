"""Renormalized coincidence-limit Wick squares W(M^2; background).

These are the source terms of the potential flow: in the local potential
approximation the scale derivative of U is k^2 times the Hadamard-subtracted
Wick square of the linearized theory, evaluated at the fluctuation mass
M^2 = k^2 + m^2 + lambda*rho.

Three kernels are provided.

Minkowski vacuum (even d):
    W = 2 (-1)^(d/2) / (Gamma(d/2) (4 pi)^(d/2)) * M^(d-2) * log(M^2/mu^2)
so for d = 4 simply (M^2 / 8 pi^2) log(M^2/mu^2). The factor 2 converts the
normal-ordered chi^2/2 expectation value to the full Wick square; it is
fixed by requiring that the kernel reproduce the vacuum coupling flows.

Thermal: the vacuum kernel plus the Bose-Einstein tadpole, whose Bose
factor keeps the massless frequency (the state is fixed once, before
regularization, so only the mode factor carries M).

de Sitter (Bunch-Davies):
    W = -(1/16 pi^2) { -2H^2/3 + [M^2 + 12(xi - 1/6) H^2]
                        * [psi(3/2+nu) + psi(3/2-nu) + log(12 H^2/mu^2)] }
with nu = sqrt(9/4 - 12 xi + M^2/H^2). The 1/16 pi^2 normalization is the
one consistent with the transcribed de Sitter coupling flows; see the
README note on normalization. Choosing mu^2 = 12 H^2 removes the log term.

The vacuum log kernel requires M^2 > 0. A flow that drives M^2 to zero has
entered a symmetry-broken/unstable region where no prescription is
implemented; callers get a DomainError and are expected to stop.
"""

import math

from ._backend import kernels
from .backgrounds import DeSitter, TadpoleValue, Thermal, resolve_mu2
from .errors import DomainError, PoleError
from .specfun import bose_tadpole

__all__ = [
    "minkowski_vacuum_wick_square", "thermal_wick_square",
    "desitter_wick_square", "desitter_nu", "check_desitter_domain",
]

# Maximum distance of a digamma argument from a non-positive integer that
# still counts as on-pole.
_POLE_EPS = 1e-12


def minkowski_vacuum_wick_square(M2, mu2, d=4):
    """Vacuum Wick square in even-dimensional Minkowski space.

    Raises DomainError for M2 <= 0 (log kernel undefined; the flow left the
    symmetric phase), mu2 <= 0, or d not in {2, 4, 6}.
    """
    if d not in (2, 4, 6):
        raise DomainError(f"even spacetime dimension 2, 4 or 6 required, got {d!r}")
    if not M2 > 0.0:
        raise DomainError(
            f"vacuum log kernel needs M2 > 0, got M2={M2!r} (symmetry-broken region)")
    if not mu2 > 0.0:
        raise DomainError(f"renormalization point mu2 must be positive, got {mu2!r}")
    return TadpoleValue(kernels.wick_minkowski(float(M2), float(mu2), d), float(M2))


def thermal_wick_square(M2, bg: Thermal, k):
    """Thermal Wick square: vacuum part (d = 4) plus Bose tadpole.

    The two contributions are individually finite and exposed separately by
    minkowski_vacuum_wick_square and specfun.bose_tadpole; this kernel is
    their sum with mu resolved through the background's MuMode (mu = k needs
    k > 0).
    """
    mu2 = resolve_mu2(bg.mu, k=k)
    vac = minkowski_vacuum_wick_square(M2, mu2, d=4)
    return TadpoleValue(vac.value + bose_tadpole(M2, bg.beta), float(M2))


def desitter_nu(M2, H2, xi):
    """Index nu = sqrt(9/4 - 12 xi + M2/H2) of the Bunch-Davies state.

    Raises DomainError when the radicand is non-positive (imaginary nu, the
    principal-series regime, for which no kernel is implemented).
    """
    rad = 2.25 - 12.0 * xi + M2 / H2
    if not rad > 0.0:
        raise DomainError(
            f"imaginary de Sitter index: 9/4 - 12 xi + M2/H2 = {rad:g} <= 0")
    return math.sqrt(rad)


def check_desitter_domain(M2, H2, xi):
    """Validate nu reality and digamma pole distance; returns nu."""
    nu = desitter_nu(M2, H2, xi)
    for arg in (1.5 - nu, 1.5 + nu):
        if arg <= 0.5 and abs(arg - round(arg)) < _POLE_EPS:
            raise PoleError(
                f"digamma pole at 3/2 -+ nu = {arg:g} (nu = {nu:g}); "
                "massless minimally coupled line is singular")
    return nu


def desitter_wick_square(M2, bg: DeSitter, k=0.0):
    """Renormalized Bunch-Davies Wick square at fluctuation mass M2.

    M2 is the full mass of the linearized theory (k^2 + m^2 + lambda*rho);
    the scale k enters only through the mu resolution when mu is tied to k.
    With mu^2 = 12 H^2 the log term vanishes identically.
    """
    if M2 < 0.0:
        raise DomainError(f"de Sitter kernel needs M2 >= 0, got {M2!r}")
    check_desitter_domain(M2, bg.H2, bg.xi)
    mu2 = resolve_mu2(bg.mu, k=(k if k else None), H2=bg.H2)
    log_mu = math.log(12.0 * bg.H2 / mu2)
    return TadpoleValue(
        kernels.wick_desitter(float(M2), float(bg.H2), float(bg.xi), log_mu),
        float(M2))
