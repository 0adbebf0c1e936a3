"""Exception types raised across the package."""


class PovmdecompError(Exception):
    """Base class for every error this package raises on purpose."""


class IterationLimitExceeded(PovmdecompError):
    """Jacobi diagonalization missed its off-diagonal target within the sweep budget."""


class DimensionTooSmall(PovmdecompError, ValueError):
    """Hilbert space dimension below 2 where at least a qubit is required."""


class NotUnitTrace(PovmdecompError, ValueError):
    """Operator expected to have unit trace does not."""


class LengthMismatch(PovmdecompError, ValueError):
    """Coordinate vector length does not match the generator basis."""


class NotPsd(PovmdecompError):
    """A measurement element has a negative eigenvalue beyond tolerance."""

    def __init__(self, index, min_eigenvalue):
        self.index = index
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"element {index} is not positive semidefinite "
            f"(min eigenvalue {min_eigenvalue:.3e})"
        )


class NotComplete(PovmdecompError):
    """Elements do not sum to the identity within tolerance."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"elements do not sum to the identity (residual {residual:.3e})")


class EmptyPovm(PovmdecompError):
    """All supplied elements are (numerically) zero."""


class NumericalStall(PovmdecompError):
    """The simplex solver can neither make progress nor certify an outcome."""


class Unbounded(PovmdecompError):
    """Phase-II descent direction with no blocking constraint."""


class InternalInfeasible(PovmdecompError):
    """A linear program that must be feasible by construction was not."""


class TooLarge(PovmdecompError):
    """Instance exceeds the configured vertex-enumeration cap."""


class Unsupported(PovmdecompError, ValueError):
    """Requested quantity is only defined for a restricted parameter range."""


class FileFormatError(PovmdecompError, ValueError):
    """Input file does not match the expected schema."""
