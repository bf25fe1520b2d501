"""Exception types raised across the package."""


class DomainError(ValueError):
    """A chart coordinate lies outside the chart's declared domain box."""

    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class RangeError(ValueError):
    """A point lies outside the image of a chart or projection."""


class DegenerateInputError(ValueError):
    """Input is degenerate for the requested construction (e.g. p == q)."""


class NotSeparableError(ValueError):
    """The Helmholtz equation does not separate in the requested chart."""


class AdmissibilityError(ValueError):
    """Separation constants violate the chart's admissibility table."""


class IntegrationError(RuntimeError):
    """The adaptive integrator could not continue (step-size collapse)."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class DegenerateModeWarning(UserWarning):
    """A closed-form solution degenerates to the zero function."""
