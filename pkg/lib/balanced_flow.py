# ===============================================
#                 balanced_flow.py
# -----------------------------------------------
# Steady zonal flow with constant buoyancy
# frequency and one jet in each hemisphere.
# ===============================================

import math

import numpy as np
from scipy.integrate import quad

from .PhysicalConstants import PhysicalConstants
from .spherical import latitude
from .errors import ConfigurationError
from .config import JET_U0, JET_PHI_M, JET_SIGMA, JET_QUAD_RTOL


def jet_velocity(phi, u_0=JET_U0, phi_M=JET_PHI_M, sigma=JET_SIGMA):

    """Zonal wind u_S(phi) of the two mid-latitude jets (m/s)."""

    cos_phi = np.cos(phi)
    return (
        u_0 * cos_phi / math.cos(phi_M)
        * np.exp(-(cos_phi - math.cos(phi_M))**2 / (2.0 * sigma**2))
    )


def _jet_slope(phi, u_0, phi_M, sigma, constants):

    # u^2 tan(phi) written as u sin(phi) * u / cos(phi), finite at the poles
    u = jet_velocity(phi, u_0, phi_M, sigma)
    u_over_cos = (
        u_0 / math.cos(phi_M)
        * math.exp(-(math.cos(phi) - math.cos(phi_M))**2 / (2.0 * sigma**2))
    )
    return u * math.sin(phi) * (
        2.0 * constants.R_earth * constants.Omega_earth + u_over_cos
    )


def jet_function(
    phi,
    u_0=JET_U0,
    phi_M=JET_PHI_M,
    sigma=JET_SIGMA,
    constants=None
):

    """
    Jet function F with dF/dphi = 2 R Omega u_S sin(phi) + u_S^2 tan(phi)
    and F(0) = 0.

    F is even in phi, so the quadrature runs over the sorted distinct values
    of |phi| and accumulates the integrals between consecutive values.

    Parameters
    ----------
    phi : float or numpy.ndarray
        Latitudes in [-pi/2, pi/2].
    u_0, phi_M, sigma : float
        Peak velocity (m/s), latitude and width of the jets.
    constants : PhysicalConstants, optional
        Earth radius and angular velocity.

    Returns (float or numpy.ndarray)
    --------------------------------
    F(phi) in m^2/s^2, same shape as phi.

    """

    constants = constants or PhysicalConstants()
    phi = np.asarray(phi, dtype=float)
    if np.any(np.abs(phi) > 0.5 * math.pi + 1e-12):
        raise ConfigurationError("Latitudes must lie in [-pi/2, pi/2]")
    magnitudes, inverse = np.unique(
        np.minimum(np.abs(phi).ravel(), 0.5 * math.pi),
        return_inverse=True
    )
    tolerance = (
        JET_QUAD_RTOL * constants.R_earth * constants.Omega_earth * u_0
    ) / max(magnitudes.size, 1)
    values = np.empty_like(magnitudes)
    total = 0.0
    previous = 0.0
    for i, magnitude in enumerate(magnitudes):
        if magnitude > previous:
            piece, _ = quad(
                _jet_slope,
                previous,
                magnitude,
                args=(u_0, phi_M, sigma, constants),
                epsabs=tolerance,
                epsrel=0.0,
                limit=200
            )
            total += piece
            previous = magnitude
        values[i] = total
    result = values[inverse.ravel()].reshape(phi.shape)
    return float(result) if result.ndim == 0 else result


def separable_factors(phi, r, N, constants, jet=None):

    """
    Horizontal factor E^S(phi) = exp(-N^2 F / g^2) and vertical factor
    E^r(r) = exp(-N^2 R_earth (r - 1) / g).

    """

    jet = jet or {}
    F = jet_function(phi, constants=constants, **jet)
    horizontal = np.exp(-N**2 * F / constants.g**2)
    vertical = np.exp(
        -N**2 * constants.R_earth * (np.asarray(r, dtype=float) - 1.0)
        / constants.g
    )
    return horizontal, vertical


def check_buoyancy_frequency(N, constants):

    epsilon = constants.epsilon(N)
    if epsilon < -1e-12:
        raise ConfigurationError(
            f"Buoyancy frequency N = {N} is below N* = {constants.n_star}"
        )
    return max(epsilon, 0.0)


def balanced_flow_state(r_hat, r, N, constants=None, jet=None):

    """
    Exner pressure, potential temperature and density of the balanced flow.

    Parameters
    ----------
    r_hat : numpy.ndarray
        Unit vectors, shape (..., 3).
    r : float or numpy.ndarray
        Scaled radii in [1, 1 + H].
    N : float
        Buoyancy frequency (1/s), at least N*.
    constants : PhysicalConstants, optional
    jet : dict, optional
        Keyword arguments of jet_function.

    Returns (tuple of numpy.ndarray)
    --------------------------------
    (pi, theta, rho), each of shape r_hat.shape[:-1] + r.shape.

    """

    constants = constants or PhysicalConstants()
    epsilon = check_buoyancy_frequency(N, constants)
    if np.any(np.asarray(r) < 1.0 - 1e-12):
        raise ConfigurationError("Radii must not lie below the surface r = 1")
    horizontal, vertical = separable_factors(
        latitude(np.asarray(r_hat, dtype=float)), r, N, constants, jet
    )
    product = np.multiply.outer(horizontal, vertical)
    pi = (epsilon + product) / (1.0 + epsilon)
    theta = constants.T_0 / product
    rho = (
        constants.p_0 / (constants.R_d * constants.T_0)
        * pi**constants.gamma * product
    )
    return pi, theta, rho


def exner_factorization_error(N, grid, vertical, constants=None, jet=None):

    """
    Relative difference (pi_fac - pi) / pi at cell centers and half levels,
    pi_fac = [(epsilon + E^r) / (1 + epsilon)] E^S.

    Returns (numpy.ndarray)
    -----------------------
    Shape (n_S, n_r).

    """

    constants = constants or PhysicalConstants()
    epsilon = check_buoyancy_frequency(N, constants)
    horizontal, radial = separable_factors(
        grid.latitudes(), vertical.cell_midpoints(), N, constants, jet
    )
    pi = (epsilon + np.multiply.outer(horizontal, radial)) / (1.0 + epsilon)
    pi_fac = np.multiply.outer(horizontal, (epsilon + radial) / (1.0 + epsilon))
    return (pi_fac - pi) / pi
