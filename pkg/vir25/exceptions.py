class Vir25Error(Exception):
    """Base class for every error raised by the package."""


class DomainError(Vir25Error, ValueError):
    """The inputs are well formed but the computation is undefined for them."""


class DegenerateFormError(DomainError):
    pass


class DegenerateIndexError(DomainError):
    pass


class LogarithmicCaseError(DomainError):
    pass


class UnsupportedParametersError(DomainError):
    pass


class ContractViolation(Vir25Error, ValueError):
    """Arguments that do not belong together, e.g. vectors from different modules."""


class UsageError(Vir25Error):
    """Malformed command-line input."""
