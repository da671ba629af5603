import numpy as np

from .errors import ShapeMismatchError, NonFiniteValueError


class Field:

    """
    One value per (horizontal cell, vertical level), columns contiguous.

    Attributes
    ----------
    values : numpy.ndarray
        C-ordered array of shape (n_S, n_r), k runs fastest.
    level_index : int
        Grid level the field lives on.

    """

    def __init__(self, values, level_index):

        values = np.ascontiguousarray(values, dtype=float)
        if values.ndim != 2:
            raise ShapeMismatchError("Field values must be of shape (n_S, n_r)")
        self.values = values
        self.level_index = level_index


    @classmethod
    def zeros(cls, shape, level_index):

        return cls(np.zeros(shape), level_index)


    @classmethod
    def random(cls, shape, level_index, seed):

        return cls(np.random.default_rng(seed).standard_normal(shape), level_index)


    @property
    def shape(self):

        return self.values.shape


    def copy(self):

        return Field(self.values.copy(), self.level_index)


    def norm(self):

        return float(np.linalg.norm(self.values))


    def check_finite(self):

        if not np.all(np.isfinite(self.values)):
            raise NonFiniteValueError("Field contains non-finite values")
