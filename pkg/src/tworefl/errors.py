class LatticeError(ValueError):
    """Invalid lattice input or an operation whose preconditions fail."""


class DegenerateLatticeError(LatticeError):
    pass


class FormError(ValueError):
    """Inconsistent or malformed finite quadratic module."""


class ConventionError(RuntimeError):
    """A Weil representation failed its defining relations."""


class CapExceeded(RuntimeError):
    """A bounded search ran out of room before reaching a decision."""


class ConfigError(ValueError):
    pass
