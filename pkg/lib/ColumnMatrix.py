import numpy as np


class ColumnMatrix:

    """
    Stencil of one vertical column T.

    Attributes
    ----------
    cell : int
        Index of the column.
    a : numpy.ndarray
        Diagonal, length n_r.
    b : numpy.ndarray
        Coupling of level k to k + 1, length n_r (last entry zero).
    c : numpy.ndarray
        Coupling of level k to k - 1, length n_r (first entry zero).
    d : numpy.ndarray
        Diagonal coupling to the three horizontal neighbours, shape (3, n_r).
    neighbors : numpy.ndarray
        The neighbouring columns belonging to the rows of d.

    """

    def __init__(self, cell, a, b, c, d, neighbors):

        self.cell = cell
        self.a = a
        self.b = b
        self.c = c
        self.d = d
        self.neighbors = neighbors


    def tridiagonal(self):

        """Dense n_r x n_r matrix of the vertical couplings."""

        matrix = np.diag(self.a)
        matrix += np.diag(self.b[:-1], k=1)
        matrix += np.diag(self.c[1:], k=-1)
        return matrix
