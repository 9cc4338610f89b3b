"""Exception types raised across the package."""


class InfoThresholdError(ValueError):
    """Base class for all domain errors."""


class DegenerateDenominatorError(InfoThresholdError):
    """Bayes update is undefined: both terms of the evidence denominator vanish."""


class UndefinedThresholdError(InfoThresholdError):
    pass


class DomainError(InfoThresholdError):
    pass


class EmptyClassError(InfoThresholdError):
    pass


class FlatCurvatureError(InfoThresholdError):
    pass


class NoBracketError(InfoThresholdError):
    pass


class NoSolutionError(InfoThresholdError):
    pass


class ConfigError(InfoThresholdError):
    pass
