"""Exception and warning types shared across the package."""


class IghError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(IghError, ValueError):
    """Invalid or unresolved configuration (bad sigma, cutoff, domain violations)."""


class DimensionError(IghError, ValueError):
    """Operands have incompatible shapes or lengths."""


class ContractError(IghError, ValueError):
    """A caller violated an operation precondition (e.g. non-symmetric block)."""


class DataInvariantError(IghError, ValueError):
    """A dataset violates a structural invariant.

    Carries the offending row/column indices when the violation is a
    fully-missing row or column.
    """

    def __init__(self, message, rows=(), cols=()):
        super().__init__(message)
        self.rows = tuple(int(r) for r in rows)
        self.cols = tuple(int(c) for c in cols)


class ConditioningError(IghError, ArithmeticError):
    """The restricted kernel spectrum is unusable for extension.

    ``lambda_max`` and ``cutoff_delta`` describe the failing spectrum so the
    caller can diagnose whether the kernel collapsed or the cutoff removed
    every mode.
    """

    def __init__(self, message, lambda_max=None, cutoff_delta=None):
        super().__init__(message)
        self.lambda_max = lambda_max
        self.cutoff_delta = cutoff_delta


class DegenerateKernelError(ConditioningError):
    """The restricted Gram block has no positive eigenvalue."""


class FormatError(IghError, ValueError):
    """Malformed input file; ``line``/``column`` locate the offending cell."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ConditioningWarning(UserWarning):
    """A column update was skipped for one sweep due to a degenerate spectrum."""


class DataInvariantWarning(UserWarning):
    """An operation produced a dataset that violates structural invariants."""
