"""Exception hierarchy shared by all hardylab modules."""


class HardyLabError(Exception):
    """Base class for every error raised by hardylab."""


class DomainError(HardyLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class TruncationError(HardyLabError):
    """The working truncation cannot represent the requested objects accurately."""


class ExpansionError(HardyLabError):
    """A function does not expand in the available basis within tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ShiftOverflowError(HardyLabError):
    """A shift would push nonzero mass past the last representable index."""


class HypothesisError(HardyLabError):
    """A structural hypothesis (invariance, isometry, A1, ...) fails on the instance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class TheoremContradiction(HypothesisError):
    """An instance passed the hypothesis checks yet violates a proven conclusion (e.g. r > n)."""


class VerificationError(HardyLabError):
    """A verification residual exceeds its tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
