import math

import numpy as np
import pytest

from lib import (
    PhysicalConstants,
    OperatorParameters,
    CoefficientField,
    ProfileSet,
    balanced_flow_profiles,
    build_partial_factorization,
    scale_profile,
    restrict_profiles,
    level_statistics,
    constant_profiles,
    jet_function,
    exner_factorization_error
)
from lib.balanced_flow import balanced_flow_state
from lib.errors import (
    ConfigurationError,
    GridMismatchError,
    ShapeMismatchError,
    NonFiniteValueError
)
from lib.config import N_STAR_ROUNDED

from oracles import jet_slope, simpson


def test_separable_buoyancy_frequency(constants):

    assert constants.n_star == pytest.approx(N_STAR_ROUNDED, abs=5e-5)
    assert constants.c_h == pytest.approx(math.sqrt(constants.c_p * constants.T_0))
    assert constants.epsilon(constants.n_star) == pytest.approx(0.0, abs=1e-14)


def test_epsilon_of_strongly_stratified_flow(constants):

    assert constants.epsilon(0.028) == pytest.approx(1.23, abs=0.01)


def test_constants_are_validated():

    with pytest.raises(ConfigurationError):
        PhysicalConstants(R_d=2000.0)
    with pytest.raises(ConfigurationError):
        PhysicalConstants(T_0=-1.0)
    with pytest.raises(ConfigurationError):
        OperatorParameters(0.0, PhysicalConstants())


def test_time_step_follows_omega(constants):

    params = OperatorParameters(2.0, constants)
    assert params.mu_dt == pytest.approx(2.0 * constants.R_earth / constants.c_h)


def test_jet_function_matches_quadrature(constants):

    for phi in [0.3, math.pi / 4.0, math.pi / 3.0]:
        expected = simpson(lambda x: jet_slope(x, constants), 0.0, phi)
        assert jet_function(phi, constants=constants) == pytest.approx(expected, rel=1e-7)


def test_jet_function_is_even_and_monotone(constants):

    phi = np.array([-1.2, -0.4, 0.0, 0.4, 1.2, 0.5 * math.pi])
    F = jet_function(phi, constants=constants)
    assert F[2] == 0.0
    assert F[0] == F[4]
    assert F[1] == F[3]
    assert 0.0 < F[3] < F[4] <= F[5]
    assert np.isfinite(F[5])


def test_jet_function_rejects_latitudes_beyond_the_poles():

    with pytest.raises(ConfigurationError):
        jet_function(2.0)


def test_profiles_separate_at_n_star(grids_l1, vertical4, make_balanced):

    full, factorized, _ = make_balanced(grids_l1.finest, vertical4, 0.0)
    assert full.kind == "full"
    assert factorized.kind == "factorized"
    for name in full.fields:
        np.testing.assert_allclose(
            factorized.dense(name), full.dense(name), rtol=1e-12, atol=0.0
        )


def test_profiles_do_not_separate_above_n_star(balanced_l1):

    full, factorized = balanced_l1["full"], balanced_l1["factorized"]
    difference = np.abs(factorized.dense("beta") / full.dense("beta") - 1.0)
    assert difference.max() > 1e-6
    full.check_positivity()
    factorized.check_positivity()


def test_factorized_profiles_share_the_horizontal_factor(balanced_l1):

    factorized = balanced_l1["factorized"]
    np.testing.assert_array_equal(
        factorized.horizontal_scalars("beta"),
        factorized.horizontal_scalars("alpha_r")
    )
    assert factorized.vertical_vector("alpha_r").size == factorized.n_r + 1
    assert factorized.storage_size() < balanced_l1["full"].storage_size()


def test_buoyancy_frequency_below_n_star_is_rejected(grids_l1, vertical4, constants):

    params = OperatorParameters(1.0, constants)
    with pytest.raises(ConfigurationError):
        balanced_flow_profiles(grids_l1.finest, vertical4, 0.01, params, constants)


def test_exner_factorization_error(grids_l1, vertical4, constants):

    grid = grids_l1.finest
    exact = exner_factorization_error(constants.n_star, grid, vertical4, constants)
    assert np.abs(exact).max() < 1e-15
    # E^S <= 1 makes the separable pressure an underestimate
    error = exner_factorization_error(0.028, grid, vertical4, constants)
    assert error.shape == (grid.n_cells, vertical4.n_r)
    assert error.max() < 1e-14
    assert error.min() < -1e-6


def test_balanced_state_at_the_equator(constants):

    pi, theta, rho = balanced_flow_state(
        np.array([[1.0, 0.0, 0.0]]), 1.0, 0.028, constants
    )
    assert pi[0] == pytest.approx(1.0)
    assert theta[0] == pytest.approx(constants.T_0)
    assert rho[0] == pytest.approx(constants.p_0 / (constants.R_d * constants.T_0))


def test_balanced_state_satisfies_the_equation_of_state(grids_l1, vertical4, constants):

    pi, theta, rho = balanced_flow_state(
        grids_l1.finest.centers, vertical4.cell_midpoints(), 0.028, constants
    )
    np.testing.assert_allclose(
        rho * theta, constants.p_0 / constants.R_d * pi**constants.gamma, rtol=1e-12
    )
    with pytest.raises(ConfigurationError):
        balanced_flow_state(grids_l1.finest.centers, 0.5, 0.028, constants)


def test_restriction_keeps_constants(grids_l1, vertical4):

    profiles = constant_profiles(grids_l1.finest, vertical4, beta=2.0, alpha_s=3.0)
    coarse = restrict_profiles(profiles, grids_l1, 0)
    assert coarse.level_index == 0
    assert coarse.fingerprint == grids_l1.grids[0].fingerprint()
    np.testing.assert_allclose(coarse.dense("beta"), 2.0, rtol=1e-14)
    np.testing.assert_allclose(coarse.dense("alpha_s"), 3.0, rtol=1e-14)
    assert coarse.dense("alpha_s").shape == (30, vertical4.n_r)


def test_restriction_conserves_cell_integrals(grids_l1, balanced_l1):

    full = balanced_l1["full"]
    coarse = restrict_profiles(full, grids_l1, 0)
    fine_areas = grids_l1.grids[1].areas[:, None]
    coarse_areas = grids_l1.grids[0].areas[:, None]
    np.testing.assert_allclose(
        (coarse_areas * coarse.dense("beta")).sum(axis=0),
        (fine_areas * full.dense("beta")).sum(axis=0),
        rtol=1e-12
    )


def test_restriction_keeps_factorized_storage(grids_l1, balanced_l1):

    coarse = restrict_profiles(balanced_l1["factorized"], grids_l1, 0)
    assert coarse.kind == "factorized"
    np.testing.assert_array_equal(
        coarse.vertical_vector("beta"),
        balanced_l1["factorized"].vertical_vector("beta")
    )


def test_restriction_from_the_wrong_level(grids_l2, vertical4):

    profiles = constant_profiles(grids_l2.finest, vertical4)
    with pytest.raises(GridMismatchError):
        restrict_profiles(profiles, grids_l2, 0)


def test_scale_profile(balanced_l1):

    full = balanced_l1["full"]
    scaled = scale_profile(full, "alpha_r", 2.0)
    np.testing.assert_allclose(scaled.dense("alpha_r"), 2.0 * full.dense("alpha_r"))
    np.testing.assert_array_equal(scaled.dense("beta"), full.dense("beta"))


def test_partial_factorization(balanced_l1):

    full, factorized = balanced_l1["full"], balanced_l1["factorized"]
    partial = build_partial_factorization(full, factorized)
    assert partial.kind == "mixed"
    assert partial.full_names == ["alpha_r"]
    np.testing.assert_array_equal(partial.dense("alpha_r"), full.dense("alpha_r"))
    np.testing.assert_array_equal(partial.dense("beta"), factorized.dense("beta"))


def test_partial_factorization_on_different_grids(grids_l2, vertical4, balanced_l1):

    other = constant_profiles(grids_l2.finest, vertical4)
    with pytest.raises(GridMismatchError):
        build_partial_factorization(other, balanced_l1["factorized"])


def test_profile_sets_check_their_fields(grids_l1, vertical4):

    grid = grids_l1.finest
    beta = CoefficientField.full(np.ones((grid.n_cells, vertical4.n_r)))
    with pytest.raises(ShapeMismatchError):
        ProfileSet.on_grid({"beta": beta}, grid, vertical4)
    fields = dict(constant_profiles(grid, vertical4).fields)
    fields["beta"] = CoefficientField.full(np.ones((3, 3)))
    with pytest.raises(ShapeMismatchError):
        ProfileSet.on_grid(fields, grid, vertical4)
    with pytest.raises(NonFiniteValueError):
        CoefficientField.full(np.array([[1.0, np.nan]]))
    with pytest.raises(ConfigurationError):
        constant_profiles(grid, vertical4, alpha_s=0.0).check_positivity()


def test_level_statistics(balanced_l1):

    statistics = level_statistics(balanced_l1["full"])
    assert set(statistics) == {"beta", "alpha_s", "alpha_r", "xi_r"}
    beta = statistics["beta"]
    assert len(beta["mean"]) == balanced_l1["full"].n_r
    assert all(low <= mean <= high for low, mean, high in zip(beta["min"], beta["mean"], beta["max"]))
