"""Exception hierarchy shared by every module of the package."""


class AzukawaPshError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(AzukawaPshError, ValueError):
    """Two objects that must live in the same C^n do not."""

    def __init__(self, expected, got, what="point"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} has dimension {got}, expected {expected}")


class DomainError(AzukawaPshError, ValueError):
    """An argument lies outside the set where the quantity is defined.

    ``value`` carries the offending quantity (a gauge value, a norm, a
    weight value) when there is one.
    """

    def __init__(self, message, value=None):
        self.value = value
        super().__init__(message)


class ConstructionError(AzukawaPshError, ValueError):
    """An object was built with parameters violating its invariants."""


class ConfigError(AzukawaPshError, ValueError):
    """Bad numerical configuration (sample budget, grid size, schedule)."""


class ConvergenceError(AzukawaPshError, RuntimeError):
    """A limit estimate did not settle within the requested spread."""

    def __init__(self, message, spread=None):
        self.spread = spread
        super().__init__(message)


class UnsupportedError(AzukawaPshError, NotImplementedError):
    """The request is well posed but no closed form is implemented for it."""
