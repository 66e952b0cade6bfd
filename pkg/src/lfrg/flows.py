"""Beta functions of the running couplings (U0, m^2, lambda).

For each background the coupling flow is available in two evaluation
routes that cross-validate each other:

* transcribed: the closed-form systems, coded term by term;
* kernel-derived: central finite differences in rho of the flow source
  S(rho) = k^2 W(k^2 + m^2 + lambda*rho), using the tadpole kernels. With
  the Taylor form U = U0 + m^2 rho + lambda rho^2/6 the rates are
  dU0/dt = S(0), dm^2/dt = S'(0), dlambda/dt = 3 S''(0).

Dimensionless variables follow background-specific conventions:

* Minkowski:       Ut = U0/k^4,      mt2 = m^2/k^2,  lt = lambda
* thermal high-T:  Ut = U0 beta^2/k, mt2 = m^2/k^2,  lt = lambda/(beta k)
* de Sitter:       mt2 = m^2/H^2,    lt = k^2 lambda / H^2   (no U0 flow)

The thermal high-temperature system keeps only the Bose contribution (the
vacuum part is subleading as beta -> 0); the exact thermal system with both
parts is available in dimensionful form for cross-checks.

The de Sitter system carries a sign mode for the standalone trigamma
difference: SIGN_PAPER uses psi'(3/2-nu) - psi'(3/2+nu), SIGN_KERNEL the
opposite sign, which is what direct differentiation of the Wick square
produces. Both are kept; the acceptance suite quantifies the difference.
The de Sitter U0 rate is reported as zero (no closed form is transcribed
for it); the dimensionful system can optionally expose the kernel value
behind include_u0.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .backgrounds import DeSitter, MinkowskiVacuum, MuMode, Thermal, resolve_mu2
from .errors import DomainError
from .specfun import bose_tadpole, bose_tadpole_derivative, polygamma, zeta3
from .tadpoles import (check_desitter_domain, desitter_wick_square,
                       minkowski_vacuum_wick_square, thermal_wick_square)

__all__ = [
    "CouplingVector", "BetaMode", "SIGN_PAPER", "SIGN_KERNEL",
    "beta_minkowski_vacuum", "beta_thermal_highT", "beta_desitter",
    "beta_from_kernel", "beta_dimensionful", "make_system",
    "MinkowskiVacuumSystem", "MinkowskiVacuumDimensionfulSystem",
    "ThermalHighTSystem", "ThermalExactSystem",
    "DeSitterSystem", "DeSitterDimensionfulSystem",
    "dimensionless_rates_from_dimensionful",
]

_8PI2 = 8.0 * math.pi ** 2
_16PI2 = 16.0 * math.pi ** 2

SIGN_PAPER = "paper"
SIGN_KERNEL = "kernel"


@dataclass(frozen=True)
class CouplingVector:
    """Ordered running couplings (U0, m2, lambda).

    The ordering is fixed everywhere: arrays, Jacobians and CSV columns all
    use (U0, m2, lambda). The flags record whether the values are
    dimensionless and under which background scaling convention.
    """

    U0: float
    m2: float
    lam: float
    dimensionless: bool = True
    convention: str = "minkowski"

    def to_array(self):
        return np.array([self.U0, self.m2, self.lam], dtype=float)

    @classmethod
    def from_array(cls, arr, dimensionless=True, convention="minkowski"):
        return cls(float(arr[0]), float(arr[1]), float(arr[2]),
                   dimensionless=dimensionless, convention=convention)

    def like(self, arr):
        """New vector with this one's flags and the given components."""
        return replace(self, U0=float(arr[0]), m2=float(arr[1]), lam=float(arr[2]))


@dataclass(frozen=True)
class BetaMode:
    """Evaluation route: 'transcribed' formulas or 'kernel-derived' FD."""

    kind: str = "transcribed"
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.kind not in ("transcribed", "kernel-derived"):
            raise DomainError(f"unknown beta mode {self.kind!r}")
        if not 1e-8 <= self.fd_step <= 1e-2:
            raise DomainError(f"fd_step must lie in [1e-8, 1e-2], got {self.fd_step!r}")


def _check_sign_mode(sign_mode):
    if sign_mode not in (SIGN_PAPER, SIGN_KERNEL):
        raise DomainError(f"sign mode must be 'paper' or 'kernel', got {sign_mode!r}")
    return +1.0 if sign_mode == SIGN_KERNEL else -1.0


class BetaSystem:
    """Common surface of a coupling flow: rhs(t, y) plus a domain test.

    y is always the 3-array (U0, m2, lambda) in the system's own variables.
    rhs raises DomainError outside the domain; domain_ok is the cheap
    predicate used by the integrator to vet accepted steps.
    """

    name = "base"
    dimensionless = True
    convention = "minkowski"

    def rhs(self, t, y):
        raise NotImplementedError

    def domain_ok(self, t, y):
        return True

    def coupling_vector(self, y):
        return CouplingVector.from_array(
            y, dimensionless=self.dimensionless, convention=self.convention)


class MinkowskiVacuumSystem(BetaSystem):
    """Dimensionless vacuum flow in d = 4; mu fixed or tied to k."""

    name = "minkowski-vacuum"
    convention = "minkowski"

    def __init__(self, mu: MuMode = MuMode.tied_to_k(), Lambda: float = 1.0):
        if mu.kind == "tied-to-h":
            raise DomainError("mu tied to H is only meaningful on de Sitter")
        if not Lambda > 0.0:
            raise DomainError("reference scale Lambda must be positive")
        self.mu = mu
        self.Lambda = Lambda

    def _log_k_term(self, t):
        if self.mu.kind == "tied-to-k":
            return 0.0
        k2 = (self.Lambda * math.exp(t)) ** 2
        return math.log(k2 / self.mu.mu2)

    def rhs(self, t, y):
        U, m2, lam = y
        om = 1.0 + m2
        if not om > 0.0:
            raise DomainError(f"1 + m2 must stay positive, got {om:g}")
        L = math.log1p(m2) + self._log_k_term(t)
        return np.array([
            -4.0 * U + om * L / _8PI2,
            -2.0 * m2 + lam * (1.0 + L) / _8PI2,
            3.0 * lam * lam / (om * _8PI2),
        ])

    def domain_ok(self, t, y):
        return 1.0 + y[1] > 0.0


class MinkowskiVacuumDimensionfulSystem(BetaSystem):
    """Dimensionful vacuum flow; k = Lambda e^t."""

    name = "minkowski-vacuum-dimensionful"
    dimensionless = False
    convention = "dimensionful"

    def __init__(self, mu: MuMode = MuMode.tied_to_k(), Lambda: float = 1.0):
        if mu.kind == "tied-to-h":
            raise DomainError("mu tied to H is only meaningful on de Sitter")
        self.mu = mu
        self.Lambda = Lambda

    def rhs(self, t, y):
        U, m2, lam = y
        k = self.Lambda * math.exp(t)
        k2 = k * k
        M2 = k2 + m2
        if not M2 > 0.0:
            raise DomainError(f"fluctuation mass squared k^2 + m^2 = {M2:g} <= 0")
        mu2 = resolve_mu2(self.mu, k=k)
        L = math.log(M2 / mu2)
        return np.array([
            k2 * M2 * L / _8PI2,
            k2 * lam * (1.0 + L) / _8PI2,
            3.0 * k2 * lam * lam / (M2 * _8PI2),
        ])

    def domain_ok(self, t, y):
        k = self.Lambda * math.exp(t)
        return k * k + y[1] > 0.0


class ThermalHighTSystem(BetaSystem):
    """Dimensionless high-temperature flow (autonomous)."""

    name = "thermal-high-t"
    convention = "thermal-high-t"

    def rhs(self, t, y):
        U, m2, lam = y
        om = 1.0 + m2
        if not om > 0.0:
            raise DomainError(f"1 + m2 must stay positive, got {om:g}")
        som = math.sqrt(om)
        return np.array([
            -U + zeta3() / (2.0 * math.pi ** 2),
            -2.0 * m2 - lam / (2.0 * math.pi ** 2 * som),
            -lam + 3.0 * lam * lam / (_8PI2 * om * som),
        ])

    def domain_ok(self, t, y):
        return 1.0 + y[1] > 0.0


class ThermalExactSystem(BetaSystem):
    """Dimensionful thermal flow: vacuum log kernel plus Bose quadratures."""

    name = "thermal-exact"
    dimensionless = False
    convention = "dimensionful"

    def __init__(self, bg: Thermal, Lambda: float = 1.0, quad_rel_tol: float = 1e-10):
        self.bg = bg
        self.Lambda = Lambda
        self.quad_rel_tol = quad_rel_tol

    def rhs(self, t, y):
        U, m2, lam = y
        k = self.Lambda * math.exp(t)
        k2 = k * k
        M2 = k2 + m2
        if not M2 > 0.0:
            raise DomainError(f"fluctuation mass squared k^2 + m^2 = {M2:g} <= 0")
        mu2 = resolve_mu2(self.bg.mu, k=k)
        L = math.log(M2 / mu2)
        beta = self.bg.beta
        W = M2 * L / _8PI2 + bose_tadpole(M2, beta, rel_tol=self.quad_rel_tol)
        W1 = (1.0 + L) / _8PI2 + bose_tadpole_derivative(
            M2, beta, 1, rel_tol=self.quad_rel_tol)
        W2 = 1.0 / (_8PI2 * M2) + bose_tadpole_derivative(
            M2, beta, 2, rel_tol=self.quad_rel_tol)
        return np.array([k2 * W, k2 * lam * W1, 3.0 * k2 * lam * lam * W2])

    def domain_ok(self, t, y):
        k = self.Lambda * math.exp(t)
        return k * k + y[1] > 0.0


def _desitter_braces(nu, x, log_mu, sign):
    """The two brace factors of the de Sitter flow at index nu.

    x is the dimensionless bracket k^2/H^2 + m^2/H^2 + 12(xi - 1/6); sign
    multiplies the standalone trigamma difference (the inner second-order
    bracket is the same in both modes).
    """
    psum = polygamma(0, 1.5 - nu) + polygamma(0, 1.5 + nu)
    d1 = polygamma(1, 1.5 + nu) - polygamma(1, 1.5 - nu)
    d2 = polygamma(2, 1.5 + nu) + polygamma(2, 1.5 - nu)
    inner = nu * d2 - d1
    brace_m = log_mu + psum + x * sign * d1 / (2.0 * nu)
    brace_l = sign * d1 + x * inner / (4.0 * nu * nu)
    return brace_m, brace_l


class DeSitterSystem(BetaSystem):
    """Dimensionless de Sitter flow of (m2/H^2, k^2 lambda/H^2).

    The ratio k^2/H^2 enters the index nu and the brackets; it runs with
    t through k = Lambda e^t unless frozen_k2_over_H2 pins it (the
    fixed-point analysis treats the ratio as an exact parameter). The U0
    component of the rate is identically zero.
    """

    name = "de-sitter"
    convention = "de-sitter"

    def __init__(self, bg: DeSitter, sign_mode=SIGN_KERNEL, Lambda: float = 1.0,
                 frozen_k2_over_H2=None):
        self.bg = bg
        self.sign = _check_sign_mode(sign_mode)
        self.sign_mode = sign_mode
        self.Lambda = Lambda
        self.frozen = frozen_k2_over_H2
        if bg.mu.kind == "tied-to-k" and frozen_k2_over_H2 == 0.0:
            raise DomainError("mu = k with k^2/H^2 frozen to zero leaves the log "
                              "term undefined; use a fixed mu or mu^2 = 12 H^2")

    def _ratio(self, t):
        if self.frozen is not None:
            return self.frozen
        k = self.Lambda * math.exp(t)
        return k * k / self.bg.H2

    def _log_mu(self, t, ratio):
        bg = self.bg
        if bg.mu.kind == "tied-to-k":
            return math.log(12.0 / ratio)
        mu2 = resolve_mu2(bg.mu, H2=bg.H2)
        return math.log(12.0 * bg.H2 / mu2)

    def rhs(self, t, y):
        U, m2, lam = y
        bg = self.bg
        ratio = self._ratio(t)
        M2_over_H2 = ratio + m2
        nu = check_desitter_domain(M2_over_H2 * bg.H2, bg.H2, bg.xi)
        x = M2_over_H2 + 12.0 * (bg.xi - 1.0 / 6.0)
        brace_m, brace_l = _desitter_braces(nu, x, self._log_mu(t, ratio), self.sign)
        return np.array([
            0.0,
            -lam / _16PI2 * brace_m,
            2.0 * lam - 3.0 * lam * lam / (_16PI2 * nu) * brace_l,
        ])

    def domain_ok(self, t, y):
        rad = 2.25 - 12.0 * self.bg.xi + self._ratio(t) + y[1]
        return rad > 0.0


class DeSitterDimensionfulSystem(BetaSystem):
    """Dimensionful de Sitter flow; k = Lambda e^t.

    include_u0=True reports dU0/dt = k^2 W(M^2) from the kernel (the
    constant -2H^2/3 term feeds it); the default reports zero, matching the
    transcribed system, which has no U0 flow.
    """

    name = "de-sitter-dimensionful"
    dimensionless = False
    convention = "dimensionful"

    def __init__(self, bg: DeSitter, sign_mode=SIGN_KERNEL, Lambda: float = 1.0,
                 include_u0: bool = False):
        self.bg = bg
        self.sign = _check_sign_mode(sign_mode)
        self.sign_mode = sign_mode
        self.Lambda = Lambda
        self.include_u0 = include_u0

    def rhs(self, t, y):
        U, m2, lam = y
        bg = self.bg
        k = self.Lambda * math.exp(t)
        k2 = k * k
        M2 = k2 + m2
        if M2 < 0.0:
            raise DomainError(f"de Sitter kernel needs M2 >= 0, got {M2:g}")
        nu = check_desitter_domain(M2, bg.H2, bg.xi)
        mu2 = resolve_mu2(bg.mu, k=(k if k else None), H2=bg.H2)
        log_mu = math.log(12.0 * bg.H2 / mu2)
        x = M2 / bg.H2 + 12.0 * (bg.xi - 1.0 / 6.0)
        brace_m, brace_l = _desitter_braces(nu, x, log_mu, self.sign)
        rU = k2 * desitter_wick_square(M2, bg, k).value if self.include_u0 else 0.0
        return np.array([
            rU,
            -k2 * lam / _16PI2 * brace_m,
            -3.0 * k2 * lam * lam / (_16PI2 * bg.H2 * nu) * brace_l,
        ])

    def domain_ok(self, t, y):
        k = self.Lambda * math.exp(t)
        M2 = k * k + y[1]
        return M2 >= 0.0 and 2.25 - 12.0 * self.bg.xi + M2 / self.bg.H2 > 0.0


def beta_minkowski_vacuum(g: CouplingVector, t: float = 0.0,
                          mu_mode: MuMode = MuMode.tied_to_k(),
                          Lambda: float = 1.0) -> CouplingVector:
    """Dimensionless vacuum beta functions at renormalization time t."""
    sys = MinkowskiVacuumSystem(mu_mode, Lambda)
    return g.like(sys.rhs(t, g.to_array()))


def beta_thermal_highT(g: CouplingVector) -> CouplingVector:
    """Dimensionless high-temperature beta functions (autonomous)."""
    return g.like(ThermalHighTSystem().rhs(0.0, g.to_array()))


def beta_desitter(g: CouplingVector, t: float, bg: DeSitter,
                  sign_mode=SIGN_KERNEL, Lambda: float = 1.0,
                  frozen_k2_over_H2=None) -> CouplingVector:
    """Dimensionless de Sitter beta functions in the chosen sign mode."""
    sys = DeSitterSystem(bg, sign_mode, Lambda, frozen_k2_over_H2)
    return g.like(sys.rhs(t, g.to_array()))


def _kernel_value(M2, bg, k):
    if isinstance(bg, MinkowskiVacuum):
        return minkowski_vacuum_wick_square(M2, resolve_mu2(bg.mu, k=k), bg.d).value
    if isinstance(bg, Thermal):
        return thermal_wick_square(M2, bg, k).value
    if isinstance(bg, DeSitter):
        return desitter_wick_square(M2, bg, k).value
    raise DomainError(f"unsupported background {bg!r}")


def beta_from_kernel(g: CouplingVector, k: float, bg,
                     fd_step: float = 1e-5) -> CouplingVector:
    """Dimensionful rates from the tadpole kernel by finite differences.

    Differentiates the source S(rho) = k^2 W(k^2 + m^2 + lambda*rho; bg)
    at rho = 0 with a central stencil whose rho step perturbs M^2 by a
    fd_step fraction. Since S depends on rho only through M^2, lambda = 0
    makes S constant and the derivative rates vanish identically.
    """
    if g.dimensionless:
        raise DomainError("beta_from_kernel expects dimensionful couplings")
    if not 1e-8 <= fd_step <= 1e-2:
        raise DomainError(f"fd_step must lie in [1e-8, 1e-2], got {fd_step!r}")
    k2 = k * k
    M20 = k2 + g.m2

    def source(rho):
        try:
            return k2 * _kernel_value(M20 + g.lam * rho, bg, k)
        except DomainError as exc:
            raise DomainError(f"kernel domain error at stencil point rho={rho:g}: "
                              f"{exc}") from exc

    s0 = source(0.0)
    if g.lam == 0.0:
        return g.like([s0, 0.0, 0.0])
    h = fd_step * max(abs(M20), k2) / abs(g.lam)
    sp = source(h)
    sm = source(-h)
    return g.like([
        s0,
        (sp - sm) / (2.0 * h),
        3.0 * (sp - 2.0 * s0 + sm) / (h * h),
    ])


def beta_dimensionful(g: CouplingVector, k: float, bg, mode: BetaMode = BetaMode(),
                      sign_mode=SIGN_KERNEL) -> CouplingVector:
    """Dimensionful rates for a background, in either evaluation route."""
    if mode.kind == "kernel-derived":
        return beta_from_kernel(g, k, bg, fd_step=mode.fd_step)
    if isinstance(bg, MinkowskiVacuum):
        sys = MinkowskiVacuumDimensionfulSystem(bg.mu, Lambda=1.0)
    elif isinstance(bg, Thermal):
        sys = ThermalExactSystem(bg, Lambda=1.0)
    elif isinstance(bg, DeSitter):
        sys = DeSitterDimensionfulSystem(bg, sign_mode=sign_mode, Lambda=1.0)
    else:
        raise DomainError(f"unsupported background {bg!r}")
    return g.like(sys.rhs(math.log(k), g.to_array()))


def dimensionless_rates_from_dimensionful(convention, g_tilde, rates, k,
                                          beta=None, H2=None):
    """Map dimensionful rates to dimensionless betas, adding scaling terms.

    g_tilde holds the dimensionless couplings at which the rates were
    produced; convention selects the background scaling rules.
    """
    rU, rm, rl = rates
    U, m2, lam = g_tilde
    if convention == "minkowski":
        return np.array([rU / k ** 4 - 4.0 * U, rm / k ** 2 - 2.0 * m2, rl])
    if convention == "thermal-high-t":
        return np.array([rU * beta ** 2 / k - U, rm / k ** 2 - 2.0 * m2,
                         rl / (beta * k) - lam])
    if convention == "de-sitter":
        return np.array([0.0, rm / H2, k ** 2 * rl / H2 + 2.0 * lam])
    raise DomainError(f"unknown convention {convention!r}")


def make_system(kind, **params):
    """Construct a registered beta system by name.

    Kinds: minkowski-vacuum, minkowski-vacuum-dimensionful, thermal-high-t,
    thermal (exact, dimensionful), de-sitter, de-sitter-dimensionful.
    """
    if kind == "minkowski-vacuum":
        return MinkowskiVacuumSystem(params.get("mu", MuMode.tied_to_k()),
                                     params.get("Lambda", 1.0))
    if kind == "minkowski-vacuum-dimensionful":
        return MinkowskiVacuumDimensionfulSystem(
            params.get("mu", MuMode.tied_to_k()), params.get("Lambda", 1.0))
    if kind == "thermal-high-t":
        return ThermalHighTSystem()
    if kind == "thermal":
        bg = Thermal(params["beta"], params.get("mu", MuMode.tied_to_k()))
        return ThermalExactSystem(bg, params.get("Lambda", 1.0))
    if kind == "de-sitter":
        bg = DeSitter(params["H2"], params["xi"],
                      params.get("mu", MuMode.tied_to_h()))
        return DeSitterSystem(bg, params.get("sign_mode", SIGN_KERNEL),
                              params.get("Lambda", 1.0),
                              params.get("frozen_k2_over_H2"))
    if kind == "de-sitter-dimensionful":
        bg = DeSitter(params["H2"], params["xi"],
                      params.get("mu", MuMode.tied_to_h()))
        return DeSitterDimensionfulSystem(bg, params.get("sign_mode", SIGN_KERNEL),
                                          params.get("Lambda", 1.0),
                                          params.get("include_u0", False))
    raise DomainError(f"unknown system kind {kind!r}")
