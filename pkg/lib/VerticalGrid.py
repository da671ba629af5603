import numpy as np

from .errors import ConfigurationError
from .config import GRADINGS


class VerticalGrid:

    """
    Radial levels of the thin shell 1 <= r <= 1 + H (scaled by R_earth).

    Attributes
    ----------
    n_r : int
        Number of vertical cells.
    depth : float
        Dimensionless shell depth H.
    grading : str
        "uniform" or "geometric".
    ratio : float
        Ratio between successive spacings of a geometric grading.
    levels : numpy.ndarray
        Faces r_0, ..., r_{n_r}, shape (n_r + 1,).
    spacings : numpy.ndarray
        r_{k+1} - r_k, shape (n_r,).
    volumes : numpy.ndarray
        v_k = (r_{k+1}^3 - r_k^3) / 3, shape (n_r,).
    masks : numpy.ndarray
        sigma_k, zero on the bottom and top faces, shape (n_r + 1,).

    Methods
    -------
    cell_midpoints()
        Half levels r_{k+1/2} of the cells.
    face_lower_midpoints()
        Half level r_{k-1/2} below every face.
    face_spans()
        r_{k+1} - r_{k-1} on interior faces.

    """

    def __init__(self, levels, grading="uniform", ratio=1.0):

        """
        Parameters
        ----------
        levels : numpy.ndarray
            Strictly increasing faces starting at 1.
        grading : str
            Label of the grading that produced the faces.
        ratio : float
            Spacing ratio of a geometric grading.

        """

        self.levels = np.asarray(levels, dtype=float)
        self.n_r = self.levels.size - 1
        self.depth = float(self.levels[-1] - self.levels[0])
        self.grading = grading
        self.ratio = ratio
        self.spacings = np.diff(self.levels)
        self.volumes = (self.levels[1:]**3 - self.levels[:-1]**3) / 3.0
        self.masks = np.ones(self.n_r + 1)
        self.masks[0] = 0.0
        self.masks[-1] = 0.0
        for array in (self.levels, self.spacings, self.volumes, self.masks):
            array.flags.writeable = False


    def cell_midpoints(self):

        return 0.5 * (self.levels[1:] + self.levels[:-1])


    def face_lower_midpoints(self):

        # The bottom face has no cell below it, its sample is masked anyway
        lower = np.empty(self.n_r + 1)
        lower[0] = self.levels[0]
        lower[1:] = self.cell_midpoints()
        return lower


    def face_spans(self):

        """
        Distance r_{k+1} - r_{k-1} between the neighbours of every face.

        Boundary faces get the one-sided span, only interior values enter
        the discretisation.

        """

        spans = np.empty(self.n_r + 1)
        spans[1:-1] = self.levels[2:] - self.levels[:-2]
        spans[0] = self.spacings[0]
        spans[-1] = self.spacings[-1]
        return spans


    def to_dict(self):

        return {
            "n_r": self.n_r,
            "depth": self.depth,
            "grading": self.grading,
            "ratio": self.ratio
        }


def build_vertical_grid(n_r, depth, grading="uniform", ratio=1.0):

    """
    Build the radial levels of the shell.

    Parameters
    ----------
    n_r : int
        Number of vertical cells (>= 1).
    depth : float
        Dimensionless depth H (> 0).
    grading : str
        "uniform", or "geometric" for spacings growing by `ratio` from the
        bottom upwards.
    ratio : float
        Ratio between successive spacings (> 0), geometric grading only.

    Returns (VerticalGrid)
    ----------------------
    The grid with r_0 = 1 and r_{n_r} = 1 + H exactly.

    """

    if int(n_r) != n_r or n_r < 1:
        raise ConfigurationError(f"n_r must be a positive integer, got {n_r}")
    if not depth > 0.0:
        raise ConfigurationError(f"Depth must be positive, got {depth}")
    if grading not in GRADINGS:
        raise ConfigurationError(f"Unknown vertical grading '{grading}'")
    if not ratio > 0.0:
        raise ConfigurationError(f"Grading ratio must be positive, got {ratio}")
    n_r = int(n_r)

    if grading == "uniform" or ratio == 1.0:
        offsets = depth * np.arange(n_r + 1) / n_r
    else:
        spacings = depth * (ratio - 1.0) / (ratio**n_r - 1.0) * ratio**np.arange(n_r)
        offsets = np.concatenate([[0.0], np.cumsum(spacings)])
    levels = 1.0 + offsets
    levels[0] = 1.0
    levels[-1] = 1.0 + depth
    return VerticalGrid(levels, grading=grading, ratio=ratio)
