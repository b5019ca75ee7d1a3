"""Exception hierarchy shared by the simulation modules."""


class HybridPrecodingError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(HybridPrecodingError, ValueError):
    """Input contains non-finite values or violates a structural precondition."""


class ShapeError(HybridPrecodingError, ValueError):
    """Operands have inconsistent dimensions."""


class ConfigurationError(HybridPrecodingError, ValueError):
    """A system or experiment configuration is invalid."""


class RankDeficiencyError(HybridPrecodingError, ValueError):
    """A matrix that must have full column rank does not."""


class DegenerateInputError(HybridPrecodingError, ValueError):
    """Zero or rank-deficient input for which the operation is undefined.

    Raised for probability-zero events of the channel model (zero channel,
    effective channel with fewer than ``N_S`` significant singular values).
    The harness treats it as a trial rejection and redraws the channel.
    """


class EmptyComplementError(HybridPrecodingError):
    """Block diagonalization with a single user has no interfering users."""
