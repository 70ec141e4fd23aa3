"""Exception hierarchy. The CLI maps ``UsageError`` to exit code 2 and every
other ``WarpftError`` to exit code 1."""


class WarpftError(Exception):
    """Base class for all package errors."""


class UsageError(WarpftError, ValueError):
    """Invalid arguments, inconsistent coordinate labels, bad schemas."""


class DomainError(WarpftError, ValueError):
    """Non-finite input or a value outside the operation's domain."""


class SingularityError(WarpftError, ArithmeticError):
    """A warp derivative vanishes or diverges where it is needed."""


class TruncationError(WarpftError):
    """A sampled function does not decay at the ends of its grid."""


class StepSizeError(WarpftError):
    """Explicit time stepping is unstable for the requested step."""


class NumericFailure(WarpftError):
    """Non-finite numbers would be emitted."""
