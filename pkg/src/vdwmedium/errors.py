"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class SingularityError(ArithmeticError):
    """Evaluation hit a pole or a coincident-point singularity."""


class ModelError(ValueError):
    """A response model is inadmissible at the requested point."""


class SpecError(ValueError):
    """A JSON material or particle description could not be parsed.

    ``field`` names the offending key path so callers can report it.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class QuadratureError(ArithmeticError):
    """The integrand produced a non-finite value."""
