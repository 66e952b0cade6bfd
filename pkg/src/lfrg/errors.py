"""Exception hierarchy shared by all lfrg modules."""


class LfrgError(Exception):
    """Base class for all errors raised by lfrg."""


class DomainError(LfrgError, ValueError):
    """Input left the mathematical domain of an operation.

    Raised e.g. for a non-positive fluctuation mass squared in the vacuum
    log kernel (the flow entered a symmetry-broken region), an imaginary
    de Sitter index, or a polygamma argument outside the supported range.
    """


class PoleError(DomainError):
    """An argument landed on a pole of a special function.

    The de Sitter kernel hits this on the massless minimally coupled line,
    where 3/2 - nu is a non-positive integer.
    """


class ConvergenceError(LfrgError, RuntimeError):
    """An iterative scheme exhausted its budget without meeting tolerance."""

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class UsageError(LfrgError, ValueError):
    """Malformed configuration or command line input."""
