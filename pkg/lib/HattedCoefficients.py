import numpy as np

from .CoefficientField import CoefficientField
from .errors import GridMismatchError, ShapeMismatchError


class HattedCoefficients:

    """
    Precomputed discrete coefficients of the operator on one grid level.

    The stencil of every column is rebuilt on the fly from these values.
    omega^2 is folded into the horizontal diffusion, vertical diffusion and
    advection coefficients. Separable profiles give separable coefficients
    (omega^2 carried by the horizontal factor).

    Attributes
    ----------
    grid : HorizontalGrid
        Grid supplying the cell neighbours and cell edges.
    vertical : VerticalGrid
    omega : float
    kind : str
        "full", "factorized" or "mixed", as the source profiles.
    fields : dict
        "beta", "alpha_s", "alpha_r", "xi_r" -> CoefficientField with shapes
        (n_S, n_r), (n_E, n_r), (n_S, n_r + 1), (n_S, n_r + 1).

    Methods
    -------
    kernel_arguments()
        Tuple of arrays in the order the compiled kernels expect.
    without_advection()
        Copy with xi_r set to zero.
    storage_size()
        Number of stored floating point values.
    coarse_conditioning_ratio()
        Largest ratio of horizontal coupling to the mass term.

    """

    def __init__(self, fields, grid, vertical, omega, kind):

        self.fields = fields
        self.grid = grid
        self.vertical = vertical
        self.omega = omega
        self.kind = kind


    @property
    def level_index(self):

        return self.grid.level_index


    @property
    def n_cells(self):

        return self.grid.n_cells


    @property
    def n_r(self):

        return self.vertical.n_r


    @property
    def shape(self):

        return (self.grid.n_cells, self.vertical.n_r)


    def kernel_arguments(self):

        arguments = [self.grid.neighbors, self.grid.cell_edges]
        for name in ["beta", "alpha_s", "alpha_r", "xi_r"]:
            arguments += [self.fields[name].horizontal, self.fields[name].vertical]
        return tuple(arguments)


    def without_advection(self):

        fields = dict(self.fields)
        fields["xi_r"] = self.fields["xi_r"].scaled(0.0)
        return HattedCoefficients(
            fields, self.grid, self.vertical, self.omega, self.kind
        )


    def storage_size(self):

        return sum(field.storage_size() for field in self.fields.values())


    def coarse_conditioning_ratio(self):

        coupling = self.fields["alpha_s"].dense()[self.grid.cell_edges].sum(axis=1)
        return float(np.max(coupling / self.fields["beta"].dense()))


def _scaled(field, horizontal_factor, vertical_factor, omega2):

    if field.is_separable:
        return CoefficientField.separable(
            omega2 * horizontal_factor * field.horizontal,
            vertical_factor * field.vertical_vector
        )
    return CoefficientField.full(
        omega2 * np.multiply.outer(horizontal_factor, vertical_factor)
        * field.vertical
    )


def assemble_hatted(profiles, grid, vertical, omega):

    """
    Hatted coefficients of a profile set.

        beta_hat  = |T| v_k beta
        as_hat    = omega^2 (r_{k+1} - r_k) |S| n.(r_T' - r_T) / |r_T' - r_T|^2 alpha_s
        ar_hat    = omega^2 sigma_k |T| 2 r_k^2 / (r_{k+1} - r_{k-1}) alpha_r
        xi_hat    = omega^2 sigma_k |T| r_k^2 (r_{k+1} - r_k) / (r_{k+1} - r_{k-1}) xi_r

    Parameters
    ----------
    profiles : ProfileSet
        Full, factorized or mixed profiles on `grid`.
    grid : HorizontalGrid
    vertical : VerticalGrid
    omega : float

    Returns (HattedCoefficients)
    ----------------------------
    Separable profiles stay separable.

    """

    if profiles.fingerprint != grid.fingerprint():
        raise GridMismatchError("Profiles were built on another horizontal grid")
    if profiles.n_r != vertical.n_r:
        raise ShapeMismatchError(
            f"Profiles have n_r = {profiles.n_r}, vertical grid has {vertical.n_r}"
        )

    levels = np.asarray(vertical.levels)
    spans = vertical.face_spans()
    above = np.zeros(vertical.n_r + 1)
    above[:-1] = vertical.spacings
    masks = np.asarray(vertical.masks)
    face_factor = masks * 2.0 * levels**2 / spans
    advection_factor = masks * levels**2 * above / spans
    omega2 = omega**2

    fields = {
        "beta": _scaled(profiles.beta, grid.areas, vertical.volumes, 1.0),
        "alpha_s": _scaled(
            profiles.alpha_s, grid.flux_factors(), vertical.spacings, omega2
        ),
        "alpha_r": _scaled(profiles.alpha_r, grid.areas, face_factor, omega2),
        "xi_r": _scaled(profiles.xi_r, grid.areas, advection_factor, omega2)
    }
    return HattedCoefficients(fields, grid, vertical, omega, profiles.kind)
