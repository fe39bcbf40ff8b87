"""Exception hierarchy shared by every module in the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(DomainError):
    """The requested configuration cannot occur.

    ``side`` is ``"above"`` or ``"below"`` when the violation is one-sided
    (e.g. a target cardinality larger than ``n`` or smaller than ``d``).
    """

    def __init__(self, message, side=None):
        super().__init__(message)
        self.side = side


class SolverError(RuntimeError):
    """A numerical solver failed to bracket or converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NoTransitionError(SolverError):
    """The net exponent shows no sign change on the feasible interval."""


class CapacityError(RuntimeError):
    """An exact enumeration would exceed its configured size guard."""
