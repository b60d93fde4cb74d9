"""Exception hierarchy shared by all modules."""


class CnoidalError(Exception):
    """Base class for errors raised by cnoidal_lab."""


class DomainError(CnoidalError, ValueError):
    """A parameter lies outside the domain where an operation is defined."""


class SolitonLimitError(DomainError):
    """A periodic-only operation was asked to handle the black soliton (E = 0)."""


class GridError(CnoidalError, ValueError):
    """Grid/operator mismatch: wrong period, odd size, foreign samples."""


class DegenerateKernelError(CnoidalError):
    """A kernel that should be one-dimensional is not (numerically)."""


class AdmissibilityError(CnoidalError, ValueError):
    """A test function violates the vanishing condition of a representation."""


class OutsideTubeError(CnoidalError):
    """The modulation fit failed: the field is not close to the wave orbit."""


class DegenerateFitError(CnoidalError):
    """The modulation Jacobian (or rate matrix) is singular."""


class IntegrationError(CnoidalError):
    """Time stepping produced non-finite values or violated its guard."""
