"""Exception types shared across the package."""


class QirError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(QirError):
    """Operands or declared dimensions do not fit together."""


class BadDimension(QirError):
    """A dimension argument is outside its allowed range."""


class NotHermitian(QirError):
    """Matrix exceeds the Hermiticity tolerance of the eigensolver."""


class NoConvergence(QirError):
    """Eigensolver exhausted its rotation budget."""


class NotNormalized(QirError):
    """Amplitude or coefficient vector is not normalized."""


class NotDistribution(QirError):
    """Vector is not a probability distribution within tolerance."""


class OutOfRange(QirError):
    """Scalar parameter outside its documented interval."""


class InvariantViolation(QirError):
    """A validated object failed one of its structural invariants."""


class ConfigError(QirError):
    """Unusable configuration, token, or input file."""


class TheoremViolation(QirError):
    """Numerical search produced slack below -tolerance; needs investigation."""
