import math

import pytest

from lib import (
    PhysicalConstants,
    OperatorParameters,
    build_icosahedral_hierarchy,
    build_vertical_grid,
    balanced_flow_profiles,
    factorize_balanced_flow,
    build_partial_factorization,
    constant_profiles,
    assemble_hatted
)
from lib.config import COURANT


@pytest.fixture(scope="session")
def constants():

    return PhysicalConstants()


@pytest.fixture(scope="session")
def grids_l1():

    return build_icosahedral_hierarchy(1)


@pytest.fixture(scope="session")
def grids_l2():

    return build_icosahedral_hierarchy(2)


@pytest.fixture(scope="session")
def vertical4(constants):

    return build_vertical_grid(4, constants.depth())


@pytest.fixture(scope="session")
def vertical8(constants):

    return build_vertical_grid(8, constants.depth())


@pytest.fixture(scope="session")
def make_balanced(constants):

    """
    Factory for (full, factorized, params) of the balanced flow at a given
    separability parameter.

    """

    def make(grid, vertical, epsilon=0.0, courant=COURANT):
        params = OperatorParameters.from_courant(courant, grid, constants)
        N = constants.n_star * math.sqrt(1.0 + epsilon)
        full = balanced_flow_profiles(grid, vertical, N, params, constants)
        factorized = factorize_balanced_flow(N, grid, vertical, params, constants)
        return full, factorized, params

    return make


@pytest.fixture(scope="session")
def balanced_l1(grids_l1, vertical4, make_balanced):

    """Non-separable balanced flow (epsilon = 1.23) on L = 1, n_r = 4."""

    full, factorized, params = make_balanced(grids_l1.finest, vertical4, 1.23)
    return {
        "full": full,
        "factorized": factorized,
        "partial": build_partial_factorization(full, factorized),
        "params": params,
        "hatted": assemble_hatted(full, grids_l1.finest, vertical4, params.omega),
        "hatted_fac": assemble_hatted(
            factorized, grids_l1.finest, vertical4, params.omega
        )
    }


@pytest.fixture(scope="session")
def constant_l1(grids_l1, vertical4, constants):

    grid = grids_l1.finest
    profiles = constant_profiles(grid, vertical4)
    params = OperatorParameters.from_courant(COURANT, grid, constants)
    return profiles, assemble_hatted(profiles, grid, vertical4, params.omega)
