"""Full LPA flow of the potential U(t, rho) on a uniform rho grid.

The potential is stored and evolved purely in rho = phi^2/2 (the effective
action of the even theory is even, so nothing phi-odd is ever evaluated).
Method of lines: each node carries

    dU_i/dt = k^2 W(M^2(rho_i); background),
    M^2(rho) = k^2 + U'(rho) + 2 rho U''(rho),

which is k^2 + d^2U/dphi^2 rewritten in rho variables. Derivatives use
second-order central stencils inside and one-sided second-order stencils at
both ends; at rho = 0 the 2 rho U'' term drops and M^2 = k^2 + U'(0).

Evolving the whole profile M^2(rho) applies the rho = 0 truncation rule
pointwise in rho, the standard grid practice for potential flows; the
coupling-truncated systems in lfrg.flows are its consistency check at small
quartic coupling.

The source is local in rho: nodes couple only through the stencils, so
there is no boundary condition beyond the one-sided stencils at rho_max.
A node whose M^2 leaves the kernel domain stops the flow with a
domain-stop, consistent with the kernel policy for the broken phase.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .backgrounds import DeSitter, MinkowskiVacuum, Thermal, resolve_mu2
from .errors import DomainError
from .integrate import FlowProblem, integrate
from .tadpoles import check_desitter_domain

__all__ = ["PotentialGrid", "mass_squared_profile", "flow_potential",
           "PotentialFlowResult", "quartic_initial_values"]


@dataclass(frozen=True)
class PotentialGrid:
    """U sampled on rho_i = i * rho_max/(N-1), with the current scale k."""

    rho_max: float
    values: np.ndarray
    k: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 16:
            raise DomainError(f"grid needs at least 16 nodes, got shape {vals.shape}")
        if not self.rho_max > 0.0:
            raise DomainError("rho_max must be positive")
        if not self.k > 0.0:
            raise DomainError("scale k must be positive")
        if not np.all(np.isfinite(vals)):
            raise DomainError("potential values must be finite")

    @property
    def n(self):
        return self.values.size

    @property
    def h(self):
        return self.rho_max / (self.n - 1)

    @property
    def rho(self):
        return np.linspace(0.0, self.rho_max, self.n)


def quartic_initial_values(rho, U0, m2, lam):
    """U0 + m2*rho + lam*rho^2/6 sampled on the given nodes."""
    return U0 + m2 * rho + lam * rho * rho / 6.0


def _derivatives(values, h):
    """Second-order U' and U'' on a uniform grid, one-sided at the ends."""
    u = values
    du = np.empty_like(u)
    d2u = np.empty_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    du[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
    d2u[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    d2u[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h)
    d2u[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) / (h * h)
    return du, d2u


def mass_squared_profile(grid: PotentialGrid):
    """M^2(rho_i) = k^2 + U' + 2 rho U'' from the grid stencils."""
    du, d2u = _derivatives(grid.values, grid.h)
    return grid.k ** 2 + du + 2.0 * grid.rho * d2u


def _source_for(bg, quad_rel_tol):
    """Array-valued W(M^2) for a background, with domain validation."""
    if isinstance(bg, MinkowskiVacuum):
        def src(M2, k):
            if np.any(M2 <= 0.0):
                i = int(np.argmin(M2))
                raise DomainError(f"M2 <= 0 at grid node {i} (M2={M2[i]:g})")
            return kernels.wick_minkowski_arr(M2, resolve_mu2(bg.mu, k=k), bg.d)
        return src
    if isinstance(bg, Thermal):
        def src(M2, k):
            if np.any(M2 <= 0.0):
                i = int(np.argmin(M2))
                raise DomainError(f"M2 <= 0 at grid node {i} (M2={M2[i]:g})")
            return kernels.wick_thermal_arr(M2, resolve_mu2(bg.mu, k=k), bg.beta,
                                            quad_rel_tol, 10_000)
        return src
    if isinstance(bg, DeSitter):
        def src(M2, k):
            if np.any(M2 < 0.0):
                i = int(np.argmin(M2))
                raise DomainError(f"M2 < 0 at grid node {i} (M2={M2[i]:g})")
            # nu reality and pole distance checked at the extreme nodes;
            # nu is monotone in M2 so the interior is covered.
            check_desitter_domain(float(M2.min()), bg.H2, bg.xi)
            check_desitter_domain(float(M2.max()), bg.H2, bg.xi)
            mu2 = resolve_mu2(bg.mu, k=(k if k else None), H2=bg.H2)
            return kernels.wick_desitter_arr(M2, bg.H2, bg.xi,
                                             math.log(12.0 * bg.H2 / mu2))
        return src
    raise DomainError(f"unsupported background {bg!r}")


class _GridSystem:
    """Method-of-lines system over the (possibly padded) potential values."""

    def __init__(self, rho, h, k0, bg, quad_rel_tol):
        self.rho = rho
        self.h = h
        self.k0 = k0
        self.source = _source_for(bg, quad_rel_tol)

    def k_of(self, t):
        return self.k0 * math.exp(t)

    def rhs(self, t, y):
        k = self.k_of(t)
        du, d2u = _derivatives(y, self.h)
        M2 = k * k + du + 2.0 * self.rho * d2u
        w = self.source(M2, k)
        # The node-wise source at the outer edge is linearly unstable: the
        # one-sided U'' stencil feeds back into the diffusion-like part of
        # the source with a growth rate that scales as 1/h^2. Second-order
        # extrapolation of the (smooth in rho) source decouples that mode;
        # at rho = 0 the 2 rho U'' term vanishes and the literal source is
        # fine.
        w[-1] = 2.0 * w[-2] - w[-3]
        return k * k * w


@dataclass
class PotentialFlowResult:
    """Snapshots of the potential flow plus the integrator termination."""

    snapshots: list
    termination: object

    @property
    def final(self):
        return self.snapshots[-1]


def flow_potential(grid: PotentialGrid, bg, t_span, rel_tol=1e-8, abs_tol=1e-10,
                   checkpoints=(), max_steps=10 ** 6, quad_rel_tol=1e-10,
                   buffer_frac=0.5):
    """Flow the gridded potential over t_span = (t0, t1).

    The scale runs as k(t) = grid.k * e^(t - t0). Snapshots are returned at
    t0, every requested checkpoint and the final time reached; if a node
    leaves the kernel domain the result carries a domain-stop termination
    and the snapshots end at the last valid state.

    The grid is padded with a buffer of buffer_frac * (N-1) extra nodes
    beyond rho_max (initialized by quadratic continuation of the last three
    user nodes, exact for quartic data) and the buffer is dropped from the
    snapshots. The closure at the outer edge contaminates a diffusion
    layer of physical width around it; the buffer keeps that layer off the
    reported nodes. buffer_frac=0 evolves the bare grid.
    """
    t0, t1 = t_span
    n = grid.n
    h = grid.h
    n_buf = int(round(buffer_frac * (n - 1)))
    rho = np.arange(n + n_buf) * h
    values = np.empty(n + n_buf)
    values[:n] = grid.values
    if n_buf:
        # quadratic through the last three user nodes, continued outward
        tail = np.polyfit(rho[n - 3:n], grid.values[n - 3:], 2)
        values[n:] = np.polyval(tail, rho[n:])

    sys = _GridSystem(rho, h, grid.k, bg, quad_rel_tol)
    # Shift so the system's own time starts at 0 and k(0) = grid.k.
    problem = FlowProblem(sys, values, 0.0, t1 - t0,
                          Lambda=grid.k, rel_tol=rel_tol, abs_tol=abs_tol,
                          max_steps=max_steps,
                          checkpoints=tuple(c - t0 for c in checkpoints))
    traj = integrate(problem)

    wanted = {0.0, *(c - t0 for c in checkpoints), traj.t[-1]}
    snaps = []
    for i, t in enumerate(traj.t):
        if any(abs(t - w) < 1e-14 for w in wanted):
            snaps.append(PotentialGrid(grid.rho_max, traj.couplings[i][:n].copy(),
                                       sys.k_of(t)))
    return PotentialFlowResult(snaps, traj.termination)
