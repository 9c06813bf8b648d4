"""Exception hierarchy. Every error is a ValueError or ArithmeticError subclass."""


class ShortPulseError(Exception):
    pass


class InvalidArgumentError(ShortPulseError, ValueError):
    pass


class ZeroMassError(ShortPulseError, ValueError):
    """Input does not have zero mean, so the antiderivative is ill-defined."""


class CriterionInapplicableError(ShortPulseError, ValueError):
    pass


class DegenerateProfileError(ShortPulseError, ValueError):
    pass


class NoCrossingError(ShortPulseError, ValueError):
    pass


class BlowupPassedError(ShortPulseError, ValueError):
    pass


class NotInvertibleError(ShortPulseError, ValueError):
    pass


class NotBreakingError(ShortPulseError, ArithmeticError):
    """No blow-up tail was found in a W(t) series."""
