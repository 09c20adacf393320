"""Exception types raised by qdiscord."""


class QDiscordError(Exception):
    """Base class for all library errors."""


class ValidationError(QDiscordError, ValueError):
    """Input failed a structural or numerical validity check."""


class NotHermitian(ValidationError):
    pass


class NotUnitTrace(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class SingularOperator(QDiscordError, ArithmeticError):
    """An operator that must be inverted has an eigenvalue at or below tolerance."""


class NotPauliReal(QDiscordError):
    """A Pauli-basis representation has a non-negligible imaginary part."""


class DegenerateQuadric(QDiscordError):
    """The R-matrix is singular, so the steering quadric does not exist."""


class NotAnEllipsoid(QDiscordError):
    """The quadric does not bound a nondegenerate ellipsoid."""


class NonRealParameters(ValidationError):
    pass


class RankTooHigh(QDiscordError):
    pass


class ComplexPencilEigenvalue(QDiscordError, ArithmeticError):
    pass
