# ===============================================
#                   profiles.py
# -----------------------------------------------
# Balanced-flow profiles, their factorisation
# and their restriction to coarse grids.
# ===============================================

import logging

import numpy as np

from .CoefficientField import CoefficientField
from .ProfileSet import ProfileSet, FactorizedProfileSet, make_profile_set
from .PhysicalConstants import PhysicalConstants
from .balanced_flow import jet_function, check_buoyancy_frequency
from .errors import GridMismatchError


def _balanced_flow_samples(grid, vertical, N, params, constants, jet):

    epsilon = check_buoyancy_frequency(N, constants)
    jet = jet or {}
    latitudes = np.concatenate([grid.latitudes(), grid.edge_latitudes()])
    F = jet_function(latitudes, constants=constants, **jet)
    horizontal = np.exp(-N**2 * F / constants.g**2)
    radii = {
        "half": vertical.cell_midpoints(),
        "face": np.asarray(vertical.levels),
        "lower": vertical.face_lower_midpoints()
    }
    radial = {
        key: np.exp(-N**2 * constants.R_earth * (r - 1.0) / constants.g)
        for key, r in radii.items()
    }
    return {
        "epsilon": epsilon,
        "cells": horizontal[:grid.n_cells],
        "edges": horizontal[grid.n_cells:],
        "radii": radii,
        "radial": radial,
        "rho_0": constants.p_0 / (constants.R_d * constants.T_0),
        # N_bar^2 equals N^2 for constant buoyancy frequency
        "lambda": 1.0 / (1.0 + (params.mu_dt * N)**2),
        # d(ln theta)/dr in units of the earth radius
        "theta_slope": N**2 * constants.R_earth / constants.g
    }


def balanced_flow_profiles(grid, vertical, N, params, constants=None, jet=None):

    """
    Profiles of the balanced zonal flow on one grid level.

    With the potential temperature scaled by T_0 the profiles are
    alpha_r = r^2 Lambda rho theta, alpha_s = rho theta,
    xi_r = Lambda rho d(theta)/dr and beta = gamma rho / pi.

    Parameters
    ----------
    grid : HorizontalGrid
    vertical : VerticalGrid
    N : float
        Buoyancy frequency (1/s), at least N*.
    params : OperatorParameters
        Supplies mu_dt for Lambda = 1 / (1 + (mu_dt N)^2).
    constants : PhysicalConstants, optional
    jet : dict, optional
        Keyword arguments of jet_function.

    Returns (ProfileSet)
    --------------------
    Full profiles: beta, alpha_s on half levels, alpha_r on faces, xi_r on
    the half level below every face.

    """

    constants = constants or PhysicalConstants()
    samples = _balanced_flow_samples(grid, vertical, N, params, constants, jet)
    epsilon = samples["epsilon"]
    gamma = constants.gamma
    rho_0 = samples["rho_0"]

    def exner(horizontal, key):
        product = np.multiply.outer(horizontal, samples["radial"][key])
        return (epsilon + product) / (1.0 + epsilon), product

    pi_cells, product_cells = exner(samples["cells"], "half")
    pi_edges, _ = exner(samples["edges"], "half")
    pi_faces, _ = exner(samples["cells"], "face")
    pi_lower, _ = exner(samples["cells"], "lower")
    faces = samples["radii"]["face"]

    fields = {
        "beta": gamma * rho_0 * pi_cells**(gamma - 1.0) * product_cells,
        "alpha_s": rho_0 * pi_edges**gamma,
        "alpha_r": faces**2 * samples["lambda"] * rho_0 * pi_faces**gamma,
        "xi_r": (
            samples["lambda"] * samples["theta_slope"] * rho_0 * pi_lower**gamma
        )
    }
    profiles = ProfileSet.on_grid(
        {name: CoefficientField.full(values) for name, values in fields.items()},
        grid,
        vertical
    )
    profiles.check_positivity()
    logging.debug(
        f"BALANCED FLOW PROFILES -> level {grid.level_index}, N = {N}, "
        f"epsilon = {epsilon:.4f}, Lambda = {samples['lambda']:.3e}"
    )
    return profiles


def factorize_balanced_flow(N, grid, vertical, params, constants=None, jet=None):

    """
    Separable approximation of the balanced-flow profiles.

    The Exner pressure is replaced by pi_fac = [(eps + E^r) / (1 + eps)] E^S,
    so every profile becomes a vertical vector times (E^S)^gamma. The
    horizontal factors of beta and alpha_r therefore coincide.

    Returns (FactorizedProfileSet)
    ------------------------------
    Vertical vectors of length n_r (beta, alpha_s) and n_r + 1 (alpha_r,
    xi_r); horizontal scalars per cell, per edge for alpha_s.

    """

    constants = constants or PhysicalConstants()
    samples = _balanced_flow_samples(grid, vertical, N, params, constants, jet)
    epsilon = samples["epsilon"]
    gamma = constants.gamma
    rho_0 = samples["rho_0"]
    radial = samples["radial"]

    def pressure(key):
        return (epsilon + radial[key]) / (1.0 + epsilon)

    horizontal_cells = samples["cells"]**gamma
    horizontal_edges = samples["edges"]**gamma
    faces = samples["radii"]["face"]

    fields = {
        "beta": CoefficientField.separable(
            horizontal_cells,
            gamma * rho_0 * pressure("half")**(gamma - 1.0) * radial["half"]
        ),
        "alpha_s": CoefficientField.separable(
            horizontal_edges,
            rho_0 * pressure("half")**gamma
        ),
        "alpha_r": CoefficientField.separable(
            horizontal_cells,
            faces**2 * samples["lambda"] * rho_0 * pressure("face")**gamma
        ),
        "xi_r": CoefficientField.separable(
            horizontal_cells,
            samples["lambda"] * samples["theta_slope"] * rho_0
            * pressure("lower")**gamma
        )
    }
    profiles = FactorizedProfileSet.on_grid(fields, grid, vertical)
    profiles.check_positivity()
    return profiles


def build_partial_factorization(full, fac):

    """
    Mixed profile set with alpha_r from `full` and all other profiles
    from `fac`.

    """

    if not full.same_grid(fac):
        raise GridMismatchError(
            "Full and factorized profiles live on different grids"
        )
    fields = dict(fac.fields)
    fields["alpha_r"] = full.alpha_r
    return make_profile_set(
        fields,
        full.level_index,
        full.fingerprint,
        full.n_cells,
        full.n_edges,
        full.n_r
    )


def scale_profile(profiles, name, factor):

    return profiles.scaled(name, factor)


def restrict_profiles(profiles, hierarchy, level):

    """
    Restrict profiles from level + 1 to level of the grid hierarchy.

    Cell fields are averaged over the four children with area weights, edge
    fields are the mean of the two fine edges on the coarse edge. Separable
    fields only restrict their horizontal factor.

    Returns (ProfileSet)
    --------------------
    A set of the same kind on the coarse level.

    """

    fine = hierarchy.grids[level + 1]
    coarse = hierarchy.grids[level]
    if profiles.fingerprint != fine.fingerprint():
        raise GridMismatchError(
            f"Profiles do not live on level {level + 1} of the hierarchy"
        )
    children = hierarchy.children(level)
    weights = fine.areas[children]
    colinear = hierarchy.colinear_edges[level]

    def cell_average(values):
        child_values = values[children]
        w = weights if child_values.ndim == 2 else weights[..., None]
        return (w * child_values).sum(axis=1) / w.sum(axis=1)

    def edge_average(values):
        return 0.5 * (values[colinear[:, 0]] + values[colinear[:, 1]])

    fields = {}
    for name, field in profiles.fields.items():
        transfer = edge_average if name == "alpha_s" else cell_average
        fields[name] = field.map_horizontal(transfer)
    return make_profile_set(
        fields,
        level,
        coarse.fingerprint(),
        coarse.n_cells,
        coarse.n_edges,
        profiles.n_r
    )


def level_statistics(profiles):

    """
    Horizontal mean, minimum and maximum of every profile on every vertical
    level.

    Returns (dict)
    --------------
    Profile name -> {"mean": list, "min": list, "max": list}.

    """

    statistics = {}
    for name in profiles.fields:
        values = profiles.dense(name)
        statistics[name] = {
            "mean": values.mean(axis=0).tolist(),
            "min": values.min(axis=0).tolist(),
            "max": values.max(axis=0).tolist()
        }
    return statistics
