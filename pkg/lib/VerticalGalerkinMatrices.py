import numpy as np

from .errors import NotPositiveDefiniteError


class VerticalGalerkinMatrices:

    """
    Vertical matrices of a factorized operator.

    With ordering (T, k), k fastest, the factorized operator without
    advection reads

        A_fac = M^S kron (omega^2 A^r + B^r) + omega^2 A^S kron M^r

    where M^S and A^S act on the horizontal index.

    Attributes
    ----------
    A_r : numpy.ndarray
        Vertical stiffness matrix, symmetric positive semi-definite.
    M_r : numpy.ndarray
        Vertical mass matrix weighted by the vertical factor of alpha_s.
    B_r : numpy.ndarray
        Vertical mass matrix weighted by the vertical factor of beta.
    omega : float
    normalization : float
        Ratio of the horizontal factors of alpha_r and beta (divided by
        omega^2) absorbed into A_r.

    Methods
    -------
    operator()
        omega^2 A^r + B^r.
    check_definiteness()
        Raise unless M^r and B^r are positive definite.

    """

    def __init__(self, A_r, M_r, B_r, omega, normalization=1.0):

        self.A_r = A_r
        self.M_r = M_r
        self.B_r = B_r
        self.omega = omega
        self.normalization = normalization


    @property
    def n_r(self):

        return self.A_r.shape[0]


    def operator(self):

        return self.omega**2 * self.A_r + self.B_r


    def check_definiteness(self):

        for name, matrix in [("M^r", self.M_r), ("B^r", self.B_r)]:
            if np.linalg.eigvalsh(matrix).min() <= 0.0:
                raise NotPositiveDefiniteError(f"{name} is not positive definite")


    def to_dict(self):

        return {
            "n_r": self.n_r,
            "omega": self.omega,
            "normalization": self.normalization
        }
