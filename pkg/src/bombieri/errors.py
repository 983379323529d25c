"""Exception hierarchy.

The CLI maps these onto exit codes: ``DomainError`` exits with 2 (invalid
argument), ``AdmissibilityError`` with 4, ``NumericalError`` with 3.
"""


class BombieriError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BombieriError, ValueError):
    """An argument lies outside the domain of the operation (t, M, mu, ...)."""


class AdmissibilityError(BombieriError):
    """The base trajectory is not an admissible extremal for the problem."""


class NumericalError(BombieriError):
    """A numerical procedure could not produce a trustworthy result."""


class DenominatorVanishing(NumericalError):
    """``H_uu(t, pi)`` vanishes, so the control derivatives are undefined."""

    def __init__(self, t: float, value: float):
        super().__init__(f"denominator vanishing at t={t:.12g} (value {value:.3e})")
        self.t = t
        self.value = value


class IntegrationError(NumericalError):
    """The right-hand side failed during integration."""

    def __init__(self, t: float, cause: BaseException):
        super().__init__(f"integration failed at t={t:.12g}: {cause}")
        self.t = t


class NoSignChange(NumericalError):
    """Neither extremum condition changes sign on the scanned interval."""


class BracketOnBoundary(AdmissibilityError):
    """A located root bracket touches the edge of the admissible domain."""


class AmbiguousMaximizer(NumericalError):
    """Two separated controls maximize the Hamiltonian equally well."""


class LeftBaseNeighborhood(NumericalError):
    """The optimal control drifted too far from ``u = pi``."""
