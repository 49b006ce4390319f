"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """Raised when a solver cannot meet its residual budget after refactorization."""


class BlowupError(ValueError):
    """Raised by enumeration-based code paths when the instance is combinatorially too large."""


class NodeBudgetExceeded(RuntimeError):
    """Raised when branch and bound exhausts its node budget.

    Carries the best incumbent found so far (may be None).
    """

    def __init__(self, message, incumbent=None):
        super().__init__(message)
        self.incumbent = incumbent


class DeadlockError(RuntimeError):
    """Raised when every worker has been rejected on a task and local solving is forbidden."""


class DegenerateInputError(ValueError):
    """Raised when an input is structurally degenerate (e.g. a zero column) and must be perturbed."""
