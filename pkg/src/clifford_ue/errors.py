"""Exception types shared across the package."""


class CliffordUEError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CliffordUEError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsatisfiableRequest(DomainError):
    """The requested object cannot exist (e.g. too many anticommuting generators)."""


class NumericalFailure(CliffordUEError, RuntimeError):
    """An eigensolver or optimizer failed to converge."""


class StructureError(CliffordUEError):
    """The NPA level-2 classification has a gap or a double assignment."""


class ConjectureViolation(CliffordUEError):
    """A strategy exceeded the conjectured bound K + 2 sqrt(K)."""

    def __init__(self, message, value=None, bound=None):
        super().__init__(message)
        self.value = value
        self.bound = bound
