class QLGError(Exception):
    pass


class ValidationError(QLGError, ValueError):
    """Input is not a valid probability distribution or table."""


class DomainError(QLGError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class CapabilityError(QLGError):
    """Request exceeds the supported range of the implementation."""


class MarginalInconsistencyError(ValidationError):
    pass


class SizeBudgetError(CapabilityError):
    pass
