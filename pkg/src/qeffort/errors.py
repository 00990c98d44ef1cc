"""Exception hierarchy.

Two failure families matter to callers (and map to CLI exit codes):
inputs that violate a contract (ValidationError, exit 2) and numerical
breakdowns during an otherwise valid computation (NumericalError, exit 3).
"""


class QeffortError(Exception):
    """Base class for all library errors."""


class ValidationError(QeffortError, ValueError):
    """Input violates a documented precondition or schema."""


class NumericalError(QeffortError, RuntimeError):
    """A computation failed numerically (drift, underflow, ambiguity)."""


class AmbiguousMatchError(NumericalError):
    """Eigenvector matching between steps admits two near-equal assignments.

    Carries the offending step index and sample time so the caller can
    re-evolve with a smaller max_step.
    """

    def __init__(self, step: int, time: float, message: str | None = None):
        self.step = step
        self.time = time
        if message is None:
            message = (
                f"ambiguous eigenvector matching at step {step} (t = {time:.6g}); "
                "re-evolve with a smaller max_step"
            )
        super().__init__(message)
