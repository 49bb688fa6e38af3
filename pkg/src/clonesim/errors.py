"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Operands live in incompatible Hilbert spaces."""


class BasisError(ValueError):
    """A basis fails orthonormality or sizing requirements."""


class DomainViolationError(ValueError):
    """A photon state lies outside the clonable domain of the atomic system.

    This is a physical restriction (a symmetry-forbidden transition), not a
    numerical failure.
    """


class ConfigError(ValueError):
    """An experiment or atomic-system configuration file is invalid."""
