"""Exception types shared across the package."""


class NoncongruenceError(Exception):
    """Base class for all package errors."""


class DegreeMismatch(NoncongruenceError, ValueError):
    pass


class NotInGroup(NoncongruenceError, ValueError):
    pass


class BoundExceeded(NoncongruenceError):
    """A configured size bound (group order, orbit size, modulus) was hit."""


class NotGenerating(NoncongruenceError, ValueError):
    pass


class NotCentral(NoncongruenceError, ValueError):
    pass


class FormatError(NoncongruenceError, ValueError):
    """Malformed input file; the message names the offending line."""


class OrthogonalityError(FormatError):
    pass


class ClosureUnstable(NoncongruenceError):
    """The closure index did not settle within the modulus schedule."""


class AuditMismatch(NoncongruenceError):
    """Criterion verdict and closure pipeline disagree."""
