"""Exception types shared across the library.

Numerical failure modes get their own classes so the CLI can map them to
exit codes (model/usage problems -> 2, nonconvergence -> 3) and so tests
can assert the specific failure.
"""


class WeylspecError(Exception):
    """Base class for all library errors."""


class ModelError(WeylspecError):
    """Invalid potential model or parameters."""


class DomainError(WeylspecError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation exactly at a pole (gamma at nonpositive integers, Y at 0)."""


class BranchCutError(DomainError):
    """Complex argument on the branch cut [0, infinity)."""


class SingularEndpointError(DomainError):
    """Regular-endpoint machinery asked to touch a strongly singular endpoint."""


class ConvergenceError(WeylspecError):
    """An iteration or truncation scheme failed to reach its tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class PrecisionLossError(ConvergenceError):
    """Series cancellation exceeded the guard ratio; no safe mode available."""


class UnsupportedRegimeError(WeylspecError):
    """Asymptotic evaluation requested outside its validity region."""


class PoleCrossingError(WeylspecError):
    """Riccati integration failed near a zero of the underlying solution."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class RotationPoleSignal(WeylspecError):
    """Boundary-condition rotation hit a pole of the rotated m-function.

    This marks a genuine eigenvalue condition, not a numerical failure.
    """


class DegenerateReferenceError(WeylspecError):
    """Companion-solution reference point makes the construction degenerate."""


class OverflowGuardError(WeylspecError):
    """A raw exponential would overflow; use ratio-based evaluation instead."""


class InconsistencyError(WeylspecError):
    """Independent probe points disagree beyond tolerance."""

    def __init__(self, message, spread=None):
        super().__init__(message)
        self.spread = spread


class RefinementError(ConvergenceError):
    """Quadrature did not stabilize under grid refinement."""


class ParsevalViolationError(WeylspecError):
    """Transform measure and basis normalization are inconsistent."""
