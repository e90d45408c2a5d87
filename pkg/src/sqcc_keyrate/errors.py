"""Exception types shared across the package."""


class QkdModelError(Exception):
    """Base class for all model-level errors."""


class NonFiniteInput(QkdModelError):
    """A covariance-matrix entry or parameter is NaN or infinite."""


class NegativeDiscriminant(QkdModelError):
    """Symplectic discriminant is negative beyond tolerance: the matrix is not
    a valid two-mode covariance matrix."""


class DomainError(QkdModelError):
    """An argument lies outside the mathematical domain of the operation."""


class NonPhysicalRescale(QkdModelError):
    """The post-mistake variance V_bd fell at or below -1, so no electronic
    gain can restore a physical second moment."""


class NonPositiveCorrelation(QkdModelError):
    """Worst-case covariance estimation drove the correlation term to zero or
    below; the block is too small for parameter estimation."""


class DegenerateLink(QkdModelError):
    """Channel transmittance underflowed the physical floor (T < 1e-12)."""


class EmptyGrid(QkdModelError):
    """A sweep or duty-cycle computation received no grid points."""


class SeedRequired(QkdModelError):
    """Monte Carlo entry points require an explicit RNG seed."""


class InsufficientSamples(QkdModelError):
    """Monte Carlo sample count is below the minimum for stable statistics."""


class ConfigError(QkdModelError):
    """Configuration file is malformed; message carries the offending key path."""
