"""Exception hierarchy shared by all kernel modules.

Every failure mode that a caller may want to branch on gets its own
class; the CLI maps the three families onto distinct exit codes
(parse errors, precondition failures, insufficient precision).
"""


class KernelError(Exception):
    """Base class for all errors raised by the kernel."""


class DataFormatError(KernelError):
    """Input text or JSON does not parse against the expected schema."""


class PrecisionError(KernelError):
    """A series is not known to the order the operation requires.

    `achievable` carries the maximal order the inputs support, or None
    when no order is determined at all.
    """

    def __init__(self, message, achievable=None):
        super().__init__(message)
        self.achievable = achievable


class VariableMismatchError(KernelError):
    """Two series or rational functions use different variables."""


class NonInvertibleError(KernelError):
    """Division by zero, or by a series that is zero to its known order."""


class MissingDataError(KernelError):
    """A table lookup needed by a computation has no entry.

    `key` identifies the exact missing entry.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class InconsistentDataError(KernelError):
    """Input data contradicts a structural identity it is required to satisfy."""


class SingularSystemError(KernelError):
    """An exact linear system that should be nonsingular is singular."""
