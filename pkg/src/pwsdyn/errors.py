"""Typed exceptions shared across the package."""


class PwsdynError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteStateError(PwsdynError):
    """An orbit or input state left the finite floating-point range.

    ``iteration`` holds the 1-based step at which divergence occurred,
    when known.
    """

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration


class DegenerateSlopeError(PwsdynError):
    """A fixed-point formula is undefined because a branch slope equals 1."""


class EmptyDatasetError(PwsdynError):
    """A model was asked to train or evaluate on zero rows."""


class TooFewRowsError(PwsdynError):
    """A dataset split cannot produce non-empty partitions."""


class EmptyImageError(PwsdynError):
    """An image with a zero dimension cannot be serialized."""


class ParseError(PwsdynError):
    """A file could not be parsed; ``line`` is the 1-based physical line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DivergedTrainingError(PwsdynError):
    """Training produced a non-finite loss; ``epoch`` is the 0-based epoch."""

    def __init__(self, message: str, epoch: int | None = None):
        super().__init__(message)
        self.epoch = epoch
