"""Exception hierarchy shared by all ramf modules."""


class RamfError(Exception):
    """Base class for every error raised by ramf."""


class DomainError(RamfError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericFailure(RamfError, ArithmeticError):
    """An iterative method did not reach its tolerance.

    ``diagnostics`` carries whatever partial information was available
    (iteration count, last correction, achieved bound).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class PoleError(RamfError, ZeroDivisionError):
    """Evaluation point coincides with (or is too close to) a pole."""

    def __init__(self, message, pole=None, term=None, residue=None):
        super().__init__(message)
        self.pole = pole
        self.term = term
        self.residue = residue


class ConditioningError(PoleError):
    """Evaluation point is within the rejection radius of a pole."""


class TruncationError(RamfError):
    """A q-expansion is not known to enough terms for the requested operation."""


class DependencyError(RamfError, KeyError):
    """A required input (e.g. an L-value for some index) is missing."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)

    def __str__(self):
        return self.args[0]


class InconsistencyError(RamfError):
    """An internal consistency check failed (fit residual, verification)."""


class NotEigenclassError(RamfError):
    """The linear system defining a Hecke eigenclass has no solution."""


class DegenerateNormalization(RamfError):
    """All critical values of a parity class are negligible."""
