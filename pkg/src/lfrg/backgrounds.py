"""Background descriptions and the renormalization-point convention.

A background bundles the physical setting of the reference state: flat
vacuum in d even dimensions, a thermal equilibrium state at inverse
temperature beta, or the Bunch-Davies state on de Sitter space with Hubble
rate squared H2 and curvature coupling xi. Each carries a MuMode fixing the
arbitrary mass scale mu of the Hadamard subtraction: a user-supplied
constant, tied to the running scale (mu = k), or tied to the Hubble rate
(mu^2 = 12 H^2, which cancels the de Sitter log term identically).
"""

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "MuMode", "MinkowskiVacuum", "Thermal", "DeSitter", "TadpoleValue",
    "resolve_mu2",
]


@dataclass(frozen=True)
class MuMode:
    """Renormalization-point convention: 'fixed', 'tied-to-k' or 'tied-to-h'."""

    kind: str
    mu2: float | None = None

    def __post_init__(self):
        if self.kind not in ("fixed", "tied-to-k", "tied-to-h"):
            raise DomainError(f"unknown mu mode {self.kind!r}")
        if self.kind == "fixed":
            if self.mu2 is None or not self.mu2 > 0.0:
                raise DomainError("fixed mu mode requires mu2 > 0")
        elif self.mu2 is not None:
            raise DomainError(f"mu mode {self.kind!r} does not take a mu2 value")

    @classmethod
    def fixed(cls, mu2):
        return cls("fixed", float(mu2))

    @classmethod
    def tied_to_k(cls):
        return cls("tied-to-k")

    @classmethod
    def tied_to_h(cls):
        return cls("tied-to-h")


def resolve_mu2(mode: MuMode, k=None, H2=None):
    """Concrete mu^2 for a MuMode, given the scale k and/or H2 as needed."""
    if mode.kind == "fixed":
        return mode.mu2
    if mode.kind == "tied-to-k":
        if k is None or not k > 0.0:
            raise DomainError("mu tied to k requires a positive scale k")
        return k * k
    if H2 is None or not H2 > 0.0:
        raise DomainError("mu tied to H requires a de Sitter background")
    return 12.0 * H2


@dataclass(frozen=True)
class MinkowskiVacuum:
    """Flat-space vacuum in d even spacetime dimensions."""

    d: int = 4
    mu: MuMode = MuMode.tied_to_k()

    def __post_init__(self):
        if self.d not in (2, 4, 6):
            raise DomainError(f"spacetime dimension must be 2, 4 or 6, got {self.d!r}")
        if self.mu.kind == "tied-to-h":
            raise DomainError("mu tied to H is only meaningful on de Sitter")


@dataclass(frozen=True)
class Thermal:
    """Equilibrium state at inverse temperature beta (d = 4)."""

    beta: float
    mu: MuMode = MuMode.tied_to_k()

    def __post_init__(self):
        if not self.beta > 0.0:
            raise DomainError(f"inverse temperature must be positive, got {self.beta!r}")
        if self.mu.kind == "tied-to-h":
            raise DomainError("mu tied to H is only meaningful on de Sitter")


@dataclass(frozen=True)
class DeSitter:
    """Bunch-Davies state on de Sitter space (d = 4)."""

    H2: float
    xi: float
    mu: MuMode = MuMode.tied_to_h()

    def __post_init__(self):
        if not self.H2 > 0.0:
            raise DomainError(f"Hubble rate squared must be positive, got {self.H2!r}")
        if not math.isfinite(self.xi):
            raise DomainError(f"curvature coupling must be finite, got {self.xi!r}")


@dataclass(frozen=True)
class TadpoleValue:
    """A renormalized Wick-square value, units [mass]^(d-2).

    M2 records the fluctuation mass squared at which the kernel was
    evaluated; value is finite whenever the kernel returns.
    """

    value: float
    M2: float
