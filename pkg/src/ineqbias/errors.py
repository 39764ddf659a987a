"""Exception hierarchy shared by the library and the command line front-end."""


class IneqBiasError(Exception):
    """Base class. ``code`` is the machine-readable identifier the CLI reports."""

    code = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context


class DomainError(IneqBiasError, ValueError):
    """Argument outside the domain of a function."""

    code = "domain_error"


class ParameterError(IneqBiasError, ValueError):
    code = "invalid_parameters"


class MixingProportionError(ParameterError):
    code = "invalid_mixing_proportions"


class CompositionLimitError(IneqBiasError, RuntimeError):
    """The number of composition terms exceeds the configured limit."""

    code = "composition_limit_exceeded"


class QuadratureError(IneqBiasError, RuntimeError):
    """Adaptive quadrature ran out of subdivisions.

    ``value`` and ``error`` hold the partial result reached when it gave up.
    """

    code = "quadrature_failed"

    def __init__(self, message, value=float("nan"), error=float("inf"), **context):
        super().__init__(message, **context)
        self.value = value
        self.error = error
