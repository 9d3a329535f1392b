"""Exception types shared across the package."""


class LinflowError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteError(LinflowError, ValueError):
    """Input contains NaN or Inf entries."""


class ShapeError(LinflowError, ValueError):
    """Input has an unsupported shape (e.g. non-square generator)."""


class FieldError(LinflowError, ValueError):
    """Operands live over incompatible scalar fields."""


class SingularMatrixError(LinflowError):
    """Linear solve against a numerically singular matrix.

    Carries the numerical rank detected during factorization.
    """

    def __init__(self, rank, size):
        self.rank = rank
        self.size = size
        super().__init__(f"matrix is numerically singular (rank {rank} of {size})")


class EigenConvergenceError(LinflowError):
    """The iterative eigenvalue solver failed to converge.

    Carries the iteration count at which the failure was declared.
    """

    def __init__(self, iterations, size):
        self.iterations = iterations
        self.size = size
        super().__init__(
            f"eigenvalue iteration did not converge after {iterations} sweeps "
            f"on a {size}x{size} matrix"
        )


class IllConditionedBasisError(LinflowError):
    """A constructed basis is too ill-conditioned to trust.

    Carries a condition-number estimate of the offending basis.
    """

    def __init__(self, condition, message="basis construction is ill-conditioned"):
        self.condition = condition
        super().__init__(f"{message} (condition estimate {condition:.3e})")


class InternalConsistencyError(LinflowError):
    """Two independent computation routes disagreed beyond tolerance."""


class NotBoundedError(LinflowError):
    """Operation requires a bounded flow (purely imaginary, semisimple spectrum)."""

    def __init__(self, reason, which="input"):
        self.which = which
        super().__init__(f"{which} does not generate a bounded flow: {reason}")


class InputFormatError(LinflowError, ValueError):
    """Matrix document could not be parsed."""
