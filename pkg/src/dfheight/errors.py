"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`DFiniteError`; the CLI maps the subclasses onto exit codes.
"""


class DFiniteError(Exception):
    """Base class for library errors."""

    exit_code = 4


class SchemaError(DFiniteError, ValueError):
    """Malformed series definition, field element text or CLI argument."""

    exit_code = 2


class SingularIndexUncovered(DFiniteError):
    """Initial terms do not cover a singular index of the recurrence."""

    exit_code = 3


class InconsistentInitialTerms(SingularIndexUncovered):
    """Supplied initial terms violate the recurrence."""


class PreconditionFailed(DFiniteError):
    pass


class DegreeOverflow(DFiniteError):
    """Operands live in different quadratic fields."""


class SingularMatrix(PreconditionFailed):
    pass


class ZeroAtOrigin(PreconditionFailed):
    pass


class MajorantViolated(PreconditionFailed):
    pass


class RadiusTooLarge(PreconditionFailed):
    pass


class InsufficientData(PreconditionFailed):
    pass
