# ===============================================
#                   errors.py
# -----------------------------------------------
# Exceptions raised by the solver library.
# ===============================================


class TPMGError(Exception):

    """Base class of all errors raised by the library."""


class ConfigurationError(TPMGError):

    """An option or parameter is outside its admissible range."""


class GridMismatchError(TPMGError):

    """Two objects were built on different horizontal grids."""


class LevelMismatchError(TPMGError):

    """A field lives on a different multigrid level than expected."""


class ShapeMismatchError(TPMGError):

    """An array does not have the shape required by the grid."""


class NonFiniteValueError(TPMGError):

    """An input array contains NaN or infinite entries."""


class SingularSystemError(TPMGError):

    """A zero pivot was met while solving a column system."""

    def __init__(self, column, message=None):

        self.column = column
        super().__init__(
            message or f"Zero pivot in the tridiagonal system of column {column}"
        )


class DenseCapExceededError(TPMGError):

    """An explicit matrix would exceed the configured size cap."""


class NotPositiveDefiniteError(TPMGError):

    """A matrix that must be symmetric positive definite is not."""


class DegenerateFitError(TPMGError):

    """The timing samples do not determine a straight line."""
