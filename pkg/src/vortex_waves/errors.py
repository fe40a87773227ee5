"""Exception hierarchy shared by all modules."""


class VortexWaveError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(VortexWaveError, ValueError):
    """Invalid grid, parameter or scenario configuration."""


class DomainError(VortexWaveError, ValueError):
    """A point or state lies outside the admissible domain."""


class SingularityError(VortexWaveError, ValueError):
    """Evaluation requested at a singular point (e.g. on the source)."""


class RegimeError(VortexWaveError, ValueError):
    """Long-wave regime violated (3 - 2 h^2 K^2 <= 0)."""


class UnsupportedOrderError(VortexWaveError, ValueError):
    """Requested truncation order is not implemented."""


class ResolutionError(VortexWaveError, ValueError):
    """Field not resolved by the grid or not decayed at the box edges."""


class SolverAbort(VortexWaveError, RuntimeError):
    """Time integration stopped because an invariant was violated."""


class NumericError(VortexWaveError, ArithmeticError):
    """Non-finite values produced by a numerical operation."""
