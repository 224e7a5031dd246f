"""Exception types raised across paracalc."""


class ParacalcError(Exception):
    """Base class for all paracalc errors."""


class ConfigurationError(ParacalcError, ValueError):
    """A numeric parameter lies outside its supported range."""


class GridMismatchError(ParacalcError, ValueError):
    """Two operands live on different grids."""


class EstimationError(ParacalcError):
    """Too few usable dyadic blocks to fit a decay exponent."""


class PreconditionError(ParacalcError, ValueError):
    """A parameter-domain hypothesis is violated.

    ``inequality`` names the failing condition in readable form.
    """

    def __init__(self, message, inequality=None):
        super().__init__(message)
        self.inequality = inequality
