class DomainError(ValueError):
    """Input outside the domain an operation is defined on."""


class DivergenceError(ArithmeticError):
    """A trajectory left the finite / bounded region."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class TrialError(RuntimeError):
    """A Monte Carlo trial failed; ``trial`` is its index."""

    def __init__(self, trial, cause):
        super().__init__(f"trial {trial} aborted: {cause}")
        self.trial = trial
        self.cause = cause
