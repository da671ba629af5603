import numpy as np

from .CoefficientField import CoefficientField
from .errors import ShapeMismatchError, ConfigurationError
from .config import PROFILE_NAMES


class ProfileSet:

    """
    Coefficient profiles beta, alpha_s, alpha_r and xi_r on one grid level.

    beta is sampled on the cells, alpha_s on the edges and alpha_r, xi_r on
    the horizontal faces of every column.

    Attributes
    ----------
    level_index : int
        Level of the horizontal grid.
    fingerprint : str
        Fingerprint of the horizontal grid.
    n_cells, n_edges, n_r : int
        Sizes of the grid.
    fields : dict
        Profile name -> CoefficientField.

    Methods
    -------
    check_positivity()
        Raise if beta, alpha_s or alpha_r is not strictly positive.
    dense(name)
        Values of one profile as a full array.
    with_field(name, field)
        Copy with one profile replaced.
    scaled(name, factor)
        Copy with one profile multiplied by a scalar.
    storage_size()
        Number of stored floating point values.

    """

    kind = "full"

    def __init__(self, fields, level_index, fingerprint, n_cells, n_edges, n_r):

        """
        Parameters
        ----------
        fields : dict
            Profile name -> CoefficientField, all four names required.
        level_index : int
            Level of the horizontal grid.
        fingerprint : str
            Fingerprint of the horizontal grid.
        n_cells, n_edges, n_r : int
            Sizes the fields are checked against.

        """

        self.level_index = level_index
        self.fingerprint = fingerprint
        self.n_cells = n_cells
        self.n_edges = n_edges
        self.n_r = n_r
        missing = set(PROFILE_NAMES) - set(fields)
        if missing:
            raise ShapeMismatchError(f"Missing profiles {sorted(missing)}")
        self.fields = {name: fields[name] for name in PROFILE_NAMES}
        for name, field in self.fields.items():
            if field.shape != self.expected_shape(name):
                raise ShapeMismatchError(
                    f"Profile {name} has shape {field.shape}, "
                    f"expected {self.expected_shape(name)}"
                )
        self._check_kind()


    @classmethod
    def on_grid(cls, fields, grid, vertical):

        return cls(
            fields,
            grid.level_index,
            grid.fingerprint(),
            grid.n_cells,
            grid.n_edges,
            vertical.n_r
        )


    def _check_kind(self):

        if any(field.is_separable for field in self.fields.values()):
            raise ShapeMismatchError("A full profile set holds full fields only")


    def expected_shape(self, name):

        if name == "beta":
            return (self.n_cells, self.n_r)
        if name == "alpha_s":
            return (self.n_edges, self.n_r)
        return (self.n_cells, self.n_r + 1)


    @property
    def beta(self):

        return self.fields["beta"]


    @property
    def alpha_s(self):

        return self.fields["alpha_s"]


    @property
    def alpha_r(self):

        return self.fields["alpha_r"]


    @property
    def xi_r(self):

        return self.fields["xi_r"]


    def check_positivity(self):

        for name in ["beta", "alpha_s", "alpha_r"]:
            field = self.fields[name]
            horizontal_ok = np.all(field.horizontal > 0.0)
            vertical = field.vertical
            if name == "alpha_r":
                # Boundary faces carry no flux
                vertical = vertical[:, 1:-1]
            if not (horizontal_ok and np.all(vertical > 0.0)):
                raise ConfigurationError(f"Profile {name} is not positive")


    def dense(self, name):

        return self.fields[name].dense()


    def with_field(self, name, field):

        fields = dict(self.fields)
        fields[name] = field
        return make_profile_set(
            fields,
            self.level_index,
            self.fingerprint,
            self.n_cells,
            self.n_edges,
            self.n_r
        )


    def scaled(self, name, factor):

        return self.with_field(name, self.fields[name].scaled(factor))


    def storage_size(self):

        return sum(field.storage_size() for field in self.fields.values())


    def same_grid(self, other):

        return (
            self.fingerprint == other.fingerprint
            and self.n_r == other.n_r
            and self.level_index == other.level_index
        )


class FactorizedProfileSet(ProfileSet):

    """
    Profiles written as products of vertical vectors and horizontal scalars.

    Methods
    -------
    vertical_vector(name)
        Vertical factor of one profile (length n_r or n_r + 1).
    horizontal_scalars(name)
        Horizontal factor of one profile (per cell or per edge).

    """

    kind = "factorized"

    def _check_kind(self):

        if not all(field.is_separable for field in self.fields.values()):
            raise ShapeMismatchError(
                "A factorized profile set holds separable fields only"
            )


    def vertical_vector(self, name):

        return self.fields[name].vertical_vector


    def horizontal_scalars(self, name):

        return self.fields[name].horizontal


class MixedProfileSet(ProfileSet):

    """Profiles where some fields are separable and others are not."""

    kind = "mixed"

    def _check_kind(self):

        pass


    @property
    def full_names(self):

        return [
            name for name, field in self.fields.items()
            if not field.is_separable
        ]


def make_profile_set(fields, level_index, fingerprint, n_cells, n_edges, n_r):

    """Wrap fields in the profile set class that matches their storage."""

    separable = [field.is_separable for field in fields.values()]
    if all(separable):
        cls = FactorizedProfileSet
    elif not any(separable):
        cls = ProfileSet
    else:
        cls = MixedProfileSet
    return cls(fields, level_index, fingerprint, n_cells, n_edges, n_r)


def constant_profiles(grid, vertical, beta=1.0, alpha_s=1.0, alpha_r=1.0, xi_r=0.0):

    """Horizontally and vertically constant full profiles."""

    values = {
        "beta": np.full((grid.n_cells, vertical.n_r), beta),
        "alpha_s": np.full((grid.n_edges, vertical.n_r), alpha_s),
        "alpha_r": np.full((grid.n_cells, vertical.n_r + 1), alpha_r),
        "xi_r": np.full((grid.n_cells, vertical.n_r + 1), xi_r)
    }
    fields = {
        name: CoefficientField.full(array) for name, array in values.items()
    }
    return ProfileSet.on_grid(fields, grid, vertical)
