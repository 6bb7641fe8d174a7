"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Malformed or inconsistent configuration / scenario input."""


class StabilityError(RuntimeError):
    """Explicit time step exceeds the stability bound; message names the
    maximal admissible dt."""


class NumericalError(RuntimeError):
    """NaN/overflow detected during time stepping; message names the step."""


class GridMismatchError(ValueError):
    """Operands live on incompatible grids."""
