import numpy as np

from .errors import ShapeMismatchError, NonFiniteValueError


class CoefficientField:

    """
    A field sampled on (horizontal entity, vertical index), stored either in
    full or as an outer product of a horizontal and a vertical vector.

    Both forms are held as a pair (horizontal, vertical) so that the value at
    (i, k) is always horizontal[i] * vertical[j, k] with j = i for full
    fields and j = 0 for separable ones. The compiled kernels read fields in
    this form without densifying them.

    Attributes
    ----------
    horizontal : numpy.ndarray
        Shape (n,); all ones for a full field.
    vertical : numpy.ndarray
        Shape (n, m) for a full field, (1, m) for a separable one.

    Methods
    -------
    full(values)
        Build a full field from an (n, m) array.
    separable(horizontal, vertical)
        Build a separable field from two vectors.
    dense()
        The (n, m) array of values.
    scaled(factor)
        Copy multiplied by a scalar.
    map_horizontal(transfer)
        Apply a linear map acting on the horizontal index.
    storage_size()
        Number of stored floating point values.

    """

    def __init__(self, horizontal, vertical, is_separable):

        self.horizontal = np.ascontiguousarray(horizontal, dtype=float)
        self.vertical = np.ascontiguousarray(vertical, dtype=float)
        self.is_separable = is_separable
        if self.horizontal.ndim != 1 or self.vertical.ndim != 2:
            raise ShapeMismatchError("Coefficient parts have wrong dimensions")
        expected_rows = 1 if is_separable else self.horizontal.size
        if self.vertical.shape[0] != expected_rows:
            raise ShapeMismatchError(
                f"Vertical part has {self.vertical.shape[0]} rows, "
                f"expected {expected_rows}"
            )
        if not (
            np.all(np.isfinite(self.horizontal))
            and np.all(np.isfinite(self.vertical))
        ):
            raise NonFiniteValueError("Coefficient field is not finite")
        self.horizontal.flags.writeable = False
        self.vertical.flags.writeable = False


    @classmethod
    def full(cls, values):

        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise ShapeMismatchError("Full fields are two-dimensional")
        return cls(np.ones(values.shape[0]), values, False)


    @classmethod
    def separable(cls, horizontal, vertical):

        return cls(horizontal, np.asarray(vertical, dtype=float)[None, :], True)


    @property
    def shape(self):

        return (self.horizontal.size, self.vertical.shape[1])


    @property
    def vertical_vector(self):

        """Vertical factor of a separable field."""

        return self.vertical[0]


    def dense(self):

        if self.is_separable:
            return np.multiply.outer(self.horizontal, self.vertical[0])
        return self.vertical.copy()


    def scaled(self, factor):

        if self.is_separable:
            return CoefficientField.separable(
                self.horizontal,
                factor * self.vertical[0]
            )
        return CoefficientField.full(factor * self.vertical)


    def map_horizontal(self, transfer):

        """
        Field obtained by applying a linear map along the horizontal index.

        Parameters
        ----------
        transfer : callable
            Maps an array whose first axis runs over the horizontal entities
            to an array over another horizontal set. Separable fields keep
            their vertical factor.

        """

        if self.is_separable:
            return CoefficientField.separable(
                transfer(self.horizontal),
                self.vertical[0]
            )
        return CoefficientField.full(transfer(self.vertical))


    def storage_size(self):

        if self.is_separable:
            return self.horizontal.size + self.vertical.size
        return self.vertical.size
