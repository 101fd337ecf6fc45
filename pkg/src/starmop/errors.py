"""Exception hierarchy shared by the library and the CLI."""


class StarMOPError(Exception):
    """Base class for all library errors."""


class ParameterError(StarMOPError, ValueError):
    """Invalid family parameters or malformed inputs."""


class NonNormalIndexError(StarMOPError):
    """The moment system for a multi-index is (numerically) singular."""


class DegenerateDenominatorError(StarMOPError, ArithmeticError):
    pass


class ClassificationUnavailableError(StarMOPError):
    """Zero classification was requested for a polynomial with complex coefficients.

    The roots are still available on the ``roots`` attribute.
    """

    def __init__(self, message, roots=None):
        super().__init__(message)
        self.roots = roots
