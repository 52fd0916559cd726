"""Exception types shared across the package."""


class EconomyError(ValueError):
    """Base class for invalid economic inputs."""


class DomainError(EconomyError):
    """An argument is outside the domain of an economic function."""


class DimensionError(EconomyError):
    """Vector lengths do not agree with the instance size."""


class DegenerateRatioError(EconomyError):
    """A quality-to-price ratio has a zero denominator."""


class UnsupportedEconomyError(EconomyError):
    """The requested operation needs the closed-form economy."""


class GridSizeError(EconomyError):
    """Exhaustive grid search was refused because it would not terminate."""


class NumericalError(RuntimeError):
    """A numeric routine produced a non-finite intermediate value."""


class ConfigError(ValueError):
    """A run configuration file is malformed."""
