import numpy as np

from .errors import DegenerateFitError
from .config import TIMING_REFERENCE_NR


class TimingModel:

    """
    Linear model t_iter = C + q n_r of the time per iteration.

    The intercept C collects the cost that does not grow with the number of
    vertical levels (loop overhead and indirect addressing of the
    horizontal grid), the slope q the cost per level.

    Attributes
    ----------
    n_r : numpy.ndarray
        Sampled numbers of vertical levels.
    seconds : numpy.ndarray
        Time per iteration of every sample.
    intercept : float
    slope : float
    r_squared : float
        Coefficient of determination of the fit, in [0, 1].

    Methods
    -------
    predict(n_r)
        Modelled time per iteration.
    intercept_share(n_r)
        C / (C + q n_r).
    to_dict()

    """

    def __init__(self, n_r, seconds):

        """
        Parameters
        ----------
        n_r : list of int
            At least three samples, at least two distinct values.
        seconds : list of float
            Measured time per iteration.

        """

        self.n_r = np.asarray(n_r, dtype=float)
        self.seconds = np.asarray(seconds, dtype=float)
        if self.n_r.shape != self.seconds.shape or self.n_r.size < 3:
            raise DegenerateFitError("At least three timing samples are needed")
        if np.unique(self.n_r).size < 2:
            raise DegenerateFitError("All samples share the same n_r")
        design = np.column_stack([np.ones_like(self.n_r), self.n_r])
        (self.intercept, self.slope), *_ = np.linalg.lstsq(
            design, self.seconds, rcond=None
        )
        self.intercept = float(self.intercept)
        self.slope = float(self.slope)
        residual = self.seconds - self.predict(self.n_r)
        spread = np.sum((self.seconds - self.seconds.mean())**2)
        if spread == 0.0:
            self.r_squared = 1.0
        else:
            self.r_squared = float(
                np.clip(1.0 - np.sum(residual**2) / spread, 0.0, 1.0)
            )


    def predict(self, n_r):

        return self.intercept + self.slope * np.asarray(n_r, dtype=float)


    def intercept_share(self, n_r=TIMING_REFERENCE_NR):

        return float(self.intercept / self.predict(n_r))


    def to_dict(self):

        return {
            "samples": [
                {"n_r": int(n_r), "seconds": float(seconds)}
                for n_r, seconds in zip(self.n_r, self.seconds)
            ],
            "intercept": self.intercept,
            "slope": self.slope,
            "r_squared": self.r_squared,
            "intercept_share": self.intercept_share(),
            "reference_n_r": TIMING_REFERENCE_NR
        }
