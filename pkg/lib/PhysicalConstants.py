import math

from .errors import ConfigurationError
from .config import (
    P_0, T_0, R_D, C_P, GRAVITY, R_EARTH, OMEGA_EARTH, ATMOSPHERE_DEPTH
)


class PhysicalConstants:

    """
    Physical constants of the dry atmosphere.

    Attributes
    ----------
    p_0, T_0, R_d, c_p, g, R_earth, Omega_earth : float
        Reference pressure (Pa), reference temperature (K), gas constant and
        specific heat (J/(kg K)), gravity (m/s^2), earth radius (m) and
        angular velocity (1/s).
    kappa : float
        R_d / c_p.
    gamma : float
        (1 - kappa) / kappa.
    c_s : float
        Speed of sound sqrt(c_p T_0 / gamma).
    c_h : float
        sqrt(gamma) * c_s = sqrt(c_p T_0).
    n_star : float
        Buoyancy frequency g / c_h at which the balanced flow separates.

    """

    def __init__(
        self,
        p_0=P_0,
        T_0=T_0,
        R_d=R_D,
        c_p=C_P,
        g=GRAVITY,
        R_earth=R_EARTH,
        Omega_earth=OMEGA_EARTH
    ):

        for name, value in [
            ("p_0", p_0), ("T_0", T_0), ("R_d", R_d), ("c_p", c_p),
            ("g", g), ("R_earth", R_earth)
        ]:
            if not value > 0.0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        if not R_d < c_p:
            raise ConfigurationError("R_d must be smaller than c_p")
        self.p_0 = p_0
        self.T_0 = T_0
        self.R_d = R_d
        self.c_p = c_p
        self.g = g
        self.R_earth = R_earth
        self.Omega_earth = Omega_earth
        self.kappa = R_d / c_p
        self.gamma = (1.0 - self.kappa) / self.kappa
        self.c_s = math.sqrt(c_p * T_0 / self.gamma)
        self.c_h = math.sqrt(self.gamma) * self.c_s
        self.n_star = g / math.sqrt(c_p * T_0)


    def epsilon(self, N):

        """Separability parameter (N / N*)^2 - 1."""

        return (N / self.n_star)**2 - 1.0


    def depth(self, depth=ATMOSPHERE_DEPTH):

        """Dimensionless shell depth H for a depth in metres."""

        return depth / self.R_earth


    def to_dict(self):

        return {
            "p_0": self.p_0,
            "T_0": self.T_0,
            "R_d": self.R_d,
            "c_p": self.c_p,
            "g": self.g,
            "R_earth": self.R_earth,
            "Omega_earth": self.Omega_earth
        }


class OperatorParameters:

    """
    Time-step dependent parameters of the elliptic operator.

    Attributes
    ----------
    omega : float
        Dimensionless c_h * mu_dt / R_earth.
    mu_dt : float
        Off-centred implicit time step (s).

    """

    def __init__(self, omega, constants):

        """
        Parameters
        ----------
        omega : float
            Positive operator parameter.
        constants : PhysicalConstants
            Constants fixing the relation between omega and mu_dt.

        """

        if not omega > 0.0:
            raise ConfigurationError(f"omega must be positive, got {omega}")
        self.omega = float(omega)
        self.mu_dt = self.omega * constants.R_earth / constants.c_h


    @classmethod
    def from_courant(cls, courant, grid, constants):

        """
        Pick omega = courant * h_L, h_L the mean distance between the
        centers of neighbouring cells of `grid`.

        """

        return cls(courant * grid.mean_center_distance(), constants)


    def to_dict(self):

        return {"omega": self.omega, "mu_dt": self.mu_dt}
