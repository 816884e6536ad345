"""
Domain exceptions.

Services raise these; routes turn them into HTTP errors and the CLI into exit codes.
"""


class LgiPtError(Exception):
    """Base class of every error raised by the simulation library."""


class DomainError(LgiPtError, ValueError):
    """A parameter or precondition is outside the supported domain."""


class ExceptionalPointError(DomainError):
    """alpha is at or beyond the guarded exceptional point pi/2 - eps."""


class NormCollapseError(LgiPtError):
    """The non-unitary evolution left a state with vanishing trace."""


class ZeroProbabilityBranchError(LgiPtError):
    """A collapse was requested onto an outcome that cannot occur."""


class ProbabilityRangeError(LgiPtError):
    """A probability fell outside [0, 1] by more than the clamp window."""


class SingularDenominatorError(LgiPtError):
    """The closed-form correlation denominator R^2 - K^2 vanished."""


class ExportError(LgiPtError, OSError):
    """Writing an exported table failed."""
