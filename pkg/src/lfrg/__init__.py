"""Lorentzian functional-renormalization-group flows of a scalar potential.

A numerical solver for the local-regulator flow of the effective potential
in the local potential approximation, with Hadamard-subtracted source
kernels for the Minkowski vacuum, thermal equilibrium states and the
Bunch-Davies state on de Sitter space, plus coupling flows, fixed-point
search and critical-exponent analysis, and a full potential flow on a
rho grid.

The numerical hot kernels run on a compiled extension when it was built
(lfrg._kernels) and otherwise on a pure-Python twin; see
lfrg.active_backend().
"""

from ._backend import active_backend
from .backgrounds import (DeSitter, MinkowskiVacuum, MuMode, TadpoleValue,
                          Thermal, resolve_mu2)
from .errors import (ConvergenceError, DomainError, LfrgError, PoleError,
                     UsageError)
from .fixedpoints import (FixedPointReport, find_fixed_point, scan_fixed_points,
                          stability_analysis)
from .flows import (SIGN_KERNEL, SIGN_PAPER, BetaMode, CouplingVector,
                    beta_desitter, beta_dimensionful, beta_from_kernel,
                    beta_minkowski_vacuum, beta_thermal_highT, make_system)
from .integrate import FlowProblem, FlowTrajectory, Termination, integrate
from .potential import (PotentialFlowResult, PotentialGrid, flow_potential,
                        mass_squared_profile, quartic_initial_values)
from .specfun import bose_tadpole, bose_tadpole_derivative, polygamma, zeta3
from .tadpoles import (desitter_nu, desitter_wick_square,
                       minkowski_vacuum_wick_square, thermal_wick_square)

__version__ = "0.1.0"

__all__ = [
    "active_backend", "__version__",
    "MuMode", "MinkowskiVacuum", "Thermal", "DeSitter", "TadpoleValue",
    "resolve_mu2",
    "LfrgError", "DomainError", "PoleError", "ConvergenceError", "UsageError",
    "polygamma", "zeta3", "bose_tadpole", "bose_tadpole_derivative",
    "minkowski_vacuum_wick_square", "thermal_wick_square",
    "desitter_wick_square", "desitter_nu",
    "CouplingVector", "BetaMode", "SIGN_PAPER", "SIGN_KERNEL",
    "beta_minkowski_vacuum", "beta_thermal_highT", "beta_desitter",
    "beta_from_kernel", "beta_dimensionful", "make_system",
    "FlowProblem", "FlowTrajectory", "Termination", "integrate",
    "FixedPointReport", "find_fixed_point", "stability_analysis",
    "scan_fixed_points",
    "PotentialGrid", "PotentialFlowResult", "mass_squared_profile",
    "flow_potential", "quartic_initial_values",
]
