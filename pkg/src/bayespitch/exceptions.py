"""Exception types shared across the package."""


class DegenerateFrameError(ValueError):
    """Raised when a frame has zero energy and cannot support a fit.

    Callers running the tracking recursion catch this and treat the
    frame as unvoiced; direct callers of the fitting functions see it
    as an error.
    """


class SingularBasisError(ValueError):
    """Raised when the harmonic normal equations are rank deficient."""


class NonConvergenceError(RuntimeError):
    """Raised when the hypergeometric series hits its iteration cap.

    Attributes:
        log_partial: log of the partial sum accumulated so far.
    """

    def __init__(self, message, log_partial):
        super().__init__(message)
        self.log_partial = log_partial


class AudioFormatError(ValueError):
    """Raised for unreadable or unsupported audio files."""


class AlignmentError(ValueError):
    """Raised when estimates and ground truth share no time span."""
