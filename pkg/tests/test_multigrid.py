import logging

import numpy as np
import pytest

from lib import (
    Field,
    SmootherConfig,
    MultigridHierarchy,
    build_hierarchy_coefficients,
    measure_cycle_rate,
    residual
)
from lib.transfer import (
    prolongation_matrix,
    restrict_field,
    prolongate_field,
    prolongate_constant,
    restrict_transpose
)
from lib.errors import LevelMismatchError, ConfigurationError
from lib.config import COARSE_RATIO_LIMIT


def test_restriction_sums_children(grids_l2):

    fine = Field(np.ones((320, 3)), 2)
    coarse = restrict_field(fine, grids_l2, 1)
    assert coarse.level_index == 1
    np.testing.assert_array_equal(coarse.values, 4.0)


@pytest.mark.parametrize("kind", ["linear", "constant"])
def test_prolongation_reproduces_constants(grids_l2, kind):

    coarse = Field(np.full((80, 3), 2.5), 1)
    fine = prolongate_field(coarse, grids_l2, 1, kind)
    assert fine.level_index == 2
    np.testing.assert_allclose(fine.values, 2.5, rtol=1e-15)
    matrix = prolongation_matrix(grids_l2.grids[1], kind)
    assert matrix.shape == (320, 80)
    np.testing.assert_allclose(np.asarray(matrix.sum(axis=1)).ravel(), 1.0)


def test_linear_prolongation_weights(grids_l1):

    matrix = prolongation_matrix(grids_l1.grids[0]).toarray()
    center_children = matrix[3::4]
    np.testing.assert_array_equal(center_children, np.eye(20))
    corner_children = np.delete(matrix, np.s_[3::4], axis=0)
    assert np.all(np.sort(corner_children, axis=1)[:, -3:] == [0.25, 0.25, 0.5])
    assert np.count_nonzero(corner_children) == 3 * 60


def test_transpose_restriction(grids_l1):

    fine = Field.random((80, 2), 1, seed=0)
    matrix = prolongation_matrix(grids_l1.grids[0])
    np.testing.assert_allclose(
        restrict_transpose(fine, grids_l1, 0).values, matrix.T @ fine.values
    )
    constant = prolongate_constant(Field(np.ones((20, 2)), 0), grids_l1, 0)
    np.testing.assert_array_equal(constant.values, 1.0)


def test_transfers_check_levels(grids_l2):

    with pytest.raises(LevelMismatchError):
        restrict_field(Field(np.ones((80, 2)), 1), grids_l2, 1)
    with pytest.raises(LevelMismatchError):
        prolongate_field(Field(np.ones((80, 2)), 2), grids_l2, 1)


def test_hierarchy_levels(grids_l2, vertical4, make_balanced):

    _, factorized, params = make_balanced(grids_l2.finest, vertical4, 1.23)
    hierarchy = build_hierarchy_coefficients(factorized, grids_l2, vertical4, params.omega)
    assert [hatted.n_cells for hatted in hierarchy.levels] == [20, 80, 320]
    assert hierarchy.n_r == 4
    assert hierarchy.finest_level == 2
    for hatted in hierarchy.levels:
        assert hatted.kind == "factorized"
        assert hatted.omega == params.omega
    # The horizontal coupling weakens relative to the mass on coarse levels
    ratios = hierarchy.conditioning_ratios()
    assert ratios[0] < ratios[1] < ratios[2]


def test_preconditioner_action_is_linear(grids_l2, vertical4, make_balanced):

    full, _, params = make_balanced(grids_l2.finest, vertical4, 1.23)
    hierarchy = build_hierarchy_coefficients(full, grids_l2, vertical4, params.omega)
    shape = hierarchy.finest.shape
    f = Field.random(shape, 2, seed=0)
    g = Field.random(shape, 2, seed=1)
    combined = Field(2.0 * f.values - 3.0 * g.values, 2)
    expected = 2.0 * hierarchy.apply(f, 2).values - 3.0 * hierarchy.apply(g, 2).values
    np.testing.assert_allclose(
        hierarchy.apply(combined, 2).values, expected, rtol=1e-9, atol=1e-12 * np.abs(expected).max()
    )


@pytest.mark.parametrize("options", [
    {},
    {"restriction": "transpose"},
    {"transfer": "constant"},
    {"smoother": SmootherConfig("block_jacobi", rho_relax=0.8)}
])
def test_v_cycles_reduce_the_residual(grids_l2, vertical4, make_balanced, options):

    full, _, params = make_balanced(grids_l2.finest, vertical4, 1.23)
    hierarchy = build_hierarchy_coefficients(
        full, grids_l2, vertical4, params.omega, **options
    )
    f = Field.random(hierarchy.finest.shape, 2, seed=2)
    u = hierarchy.apply(f, 3)
    assert residual(hierarchy.finest, u, f).norm() < 0.5 * f.norm()
    assert measure_cycle_rate(hierarchy, f, 4) < 0.9


def test_cycle_rate_of_a_zero_right_hand_side(grids_l1, vertical4, make_balanced):

    _, factorized, params = make_balanced(grids_l1.finest, vertical4)
    hierarchy = build_hierarchy_coefficients(factorized, grids_l1, vertical4, params.omega)
    f = Field.zeros(hierarchy.finest.shape, 1)
    assert measure_cycle_rate(hierarchy, f, 3) == 0.0
    with pytest.raises(ConfigurationError):
        measure_cycle_rate(hierarchy, f, 1)


def test_hierarchy_validation(grids_l2, balanced_l1):

    with pytest.raises(LevelMismatchError):
        MultigridHierarchy(grids_l2, [balanced_l1["hatted"]])
    levels = [balanced_l1["hatted"]] * 3
    with pytest.raises(ConfigurationError):
        MultigridHierarchy(grids_l2, levels, transfer="cubic")
    with pytest.raises(ConfigurationError):
        MultigridHierarchy(grids_l2, levels, coarse_sweeps=0)


@pytest.mark.slow
def test_factorized_cycle_rate_on_the_default_grid(make_balanced):

    from lib import build_icosahedral_hierarchy, build_vertical_grid, PhysicalConstants

    grids = build_icosahedral_hierarchy(4)
    vertical = build_vertical_grid(64, PhysicalConstants().depth())
    _, factorized, params = make_balanced(grids.finest, vertical, 1.23)
    hierarchy = build_hierarchy_coefficients(factorized, grids, vertical, params.omega)
    f = Field.random(hierarchy.finest.shape, 4, seed=0)
    assert measure_cycle_rate(hierarchy, f, 6) < 0.5


def test_direct_coarse_solve_is_exact(grids_l1, vertical4, make_balanced):

    full, _, params = make_balanced(grids_l1.finest, vertical4, 1.23)
    hierarchy = build_hierarchy_coefficients(full, grids_l1, vertical4, params.omega)
    coarsest = hierarchy.levels[0]
    f = Field.random(coarsest.shape, 0, seed=4)
    u = hierarchy.coarse_solve(f)
    assert u.level_index == 0
    assert residual(coarsest, u, f).norm() <= 1e-10 * f.norm()
    np.testing.assert_array_equal(hierarchy.v_cycle(0, f).values, u.values)


def test_single_sweep_coarse_solve_warns(grids_l1, vertical4, make_balanced, caplog):

    full, _, params = make_balanced(grids_l1.finest, vertical4, 1.23, courant=100.0)
    with caplog.at_level(logging.WARNING):
        hierarchy = build_hierarchy_coefficients(
            full, grids_l1, vertical4, params.omega, coarse_solver="smoother"
        )
    assert hierarchy.conditioning_ratios()[0] > COARSE_RATIO_LIMIT
    assert "NOT MASS-DOMINATED" in caplog.text
    # One sweep leaves a residual on the coarsest level
    coarsest = hierarchy.levels[0]
    f = Field.random(coarsest.shape, 0, seed=4)
    assert residual(coarsest, hierarchy.coarse_solve(f), f).norm() > 1e-6 * f.norm()


def test_direct_coarse_solve_beats_a_single_sweep(grids_l2, vertical4, make_balanced):

    full, _, params = make_balanced(grids_l2.finest, vertical4, 1.23, courant=100.0)
    f = Field.random((320, 4), 2, seed=6)
    rates = {
        solver: measure_cycle_rate(
            build_hierarchy_coefficients(
                full, grids_l2, vertical4, params.omega, coarse_solver=solver
            ),
            f,
            5
        )
        for solver in ["direct", "smoother"]
    }
    assert rates["direct"] < rates["smoother"]


def test_unknown_coarse_solver(grids_l1, vertical4, make_balanced):

    full, _, params = make_balanced(grids_l1.finest, vertical4)
    with pytest.raises(ConfigurationError):
        build_hierarchy_coefficients(
            full, grids_l1, vertical4, params.omega, coarse_solver="cholesky"
        )
