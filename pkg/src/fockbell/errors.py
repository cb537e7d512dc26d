"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class SizeGuardError(DomainError):
    """A brute-force computation was refused because the input is too large."""


class BudgetError(RuntimeError):
    """An optimizer ran out of evaluations before finishing a mandatory stage."""


class ConsistencyError(RuntimeError):
    """A numerical result violated an internal invariant (e.g. a negative probability)."""
