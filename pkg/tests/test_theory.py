import numpy as np
import pytest

from lib import (
    SmootherConfig,
    assemble_hatted,
    build_hierarchy_coefficients,
    build_icosahedral_hierarchy,
    build_vertical_grid,
    constant_profiles,
    scale_profile,
    theory
)
from lib.PerturbationReport import PerturbationReport
from lib.VerticalGalerkinMatrices import VerticalGalerkinMatrices
from lib.errors import (
    ConfigurationError,
    DenseCapExceededError,
    NotPositiveDefiniteError
)


@pytest.fixture(scope="module")
def desk(grids_l1, vertical4, make_balanced):

    """Operators without advection at epsilon = 0 and epsilon = 1.23."""

    grid = grids_l1.finest
    operators = {}
    for epsilon in [0.0, 1.23]:
        full, factorized, params = make_balanced(grid, vertical4, epsilon)
        full = scale_profile(full, "xi_r", 0.0)
        factorized = scale_profile(factorized, "xi_r", 0.0)
        operators[epsilon] = {
            "full": assemble_hatted(full, grid, vertical4, params.omega),
            "factorized": assemble_hatted(factorized, grid, vertical4, params.omega),
            "hierarchy": build_hierarchy_coefficients(
                factorized, grids_l1, vertical4, params.omega
            )
        }
    return operators


def test_vertical_laplacian():

    matrix = theory.vertical_laplacian([0.0, 2.0, 3.0, 0.0])
    np.testing.assert_array_equal(
        matrix, [[2.0, -2.0, 0.0], [-2.0, 5.0, -3.0], [0.0, -3.0, 3.0]]
    )
    np.testing.assert_array_equal(matrix.sum(axis=1), 0.0)


def test_factorized_operator_is_a_kronecker_sum(desk):

    fac = desk[0.0]["factorized"]
    vertical = theory.factorized_vertical_matrices(fac)
    assert vertical.normalization == pytest.approx(1.0, rel=1e-12)
    M_S, A_S = theory.horizontal_matrices(fac)
    expected = theory.theory_matrix(fac)
    difference = theory.kron_operator(vertical, M_S, A_S) - expected
    assert np.abs(difference).max() <= 1e-12 * np.abs(expected).max()


def test_vertical_eigenvectors(desk):

    vertical = theory.factorized_vertical_matrices(desk[0.0]["factorized"])
    lambdas, vectors = theory.vertical_eigendecomposition(vertical)
    assert np.all(lambdas > 0.0)
    assert np.all(np.diff(lambdas) >= 0.0)
    np.testing.assert_allclose(vectors.T @ vertical.M_r @ vectors, np.eye(4), atol=1e-10)


def test_subspaces_decouple_for_separable_profiles(desk):

    fac = desk[0.0]["factorized"]
    _, vectors = theory.vertical_eigendecomposition(
        theory.factorized_vertical_matrices(fac)
    )
    assert theory.check_subspace_decoupling(theory.theory_matrix(fac), vectors) <= 1e-9


def test_subspaces_couple_for_non_separable_profiles(desk):

    operators = desk[1.23]
    _, vectors = theory.vertical_eigendecomposition(
        theory.factorized_vertical_matrices(operators["factorized"])
    )
    coupling = theory.check_subspace_decoupling(
        theory.theory_matrix(operators["full"]), vectors
    )
    assert coupling > 1e-6


def test_energy_norm_of_a_scaled_operator():

    rng = np.random.default_rng(0)
    X = rng.standard_normal((6, 6))
    A = X @ X.T + 6.0 * np.eye(6)
    D = rng.standard_normal((6, 6))
    D = D + D.T
    assert theory.energy_norm_delta(A, 0.5 * A) == pytest.approx(0.5)
    assert theory.energy_norm_delta(A, -3.0 * D) == pytest.approx(
        3.0 * theory.energy_norm_delta(A, D)
    )
    assert theory.energy_norm(A, np.eye(6)) == pytest.approx(1.0)
    assert theory.energy_norm(A, np.zeros((6, 6))) == 0.0
    with pytest.raises(NotPositiveDefiniteError):
        theory.energy_norm_delta(-A, D)
    with pytest.raises(ConfigurationError):
        theory.energy_norm_delta(A, np.triu(A))


def test_perturbation_vanishes_for_separable_profiles(desk):

    operators = desk[0.0]
    report = theory.measure_perturbation(operators["full"], operators["hierarchy"])
    assert report.delta < 1e-10
    # Spectral radius never exceeds the energy norm
    assert report.rho_full <= report.rho_factorized + 1e-6
    assert report.status == "pass"


def test_perturbation_bound_holds(desk):

    operators = desk[1.23]
    report = theory.measure_perturbation(operators["full"], operators["hierarchy"], mu=2)
    assert report.delta > 1e-6
    assert report.status in ("pass", "out_of_theory")
    if report.status == "pass":
        assert report.rho_full <= report.bound + report.slack


def test_perturbation_report():

    report = PerturbationReport(0.1, 0.5, 0.6)
    assert report.bound == pytest.approx(0.65)
    assert report.min_cycles == 1
    assert report.single_cycle_admissible
    assert report.passed

    report = PerturbationReport(0.5, 0.5, 1.0, mu=1)
    assert report.bound == pytest.approx(1.25)
    assert report.min_cycles == 2
    assert not report.single_cycle_admissible

    report = PerturbationReport(0.1, 0.5, 0.9)
    assert report.status == "fail"
    assert not report.to_dict()["pass"]

    report = PerturbationReport(1.2, 0.1, 0.5)
    assert report.status == "out_of_theory"
    assert report.min_cycles is None
    assert PerturbationReport(0.2, 0.0, 0.2).min_cycles == 1


def test_smoothing_property(desk):

    matrix = theory.theory_matrix(desk[1.23]["full"])
    scale = np.abs(matrix).max()
    bound = theory.jacobi_relaxation_bound(matrix, 4)
    assert 0.5 - 1e-12 <= bound <= 1.0 + 1e-12
    for order in ["natural", "reversed"]:
        sor = SmootherConfig("block_sor", rho_relax=1.5, order=order)
        assert theory.check_smoothing_property(matrix, 4, sor) >= -1e-10 * scale
    safe = SmootherConfig("block_jacobi", rho_relax=bound)
    assert theory.check_smoothing_property(matrix, 4, safe) >= -1e-10 * scale
    unsafe = SmootherConfig("block_jacobi", rho_relax=1.5 * bound)
    assert theory.check_smoothing_property(matrix, 4, unsafe) < 0.0


def test_block_sor_smoother_matrix(desk):

    matrix = theory.theory_matrix(desk[0.0]["full"])
    W = theory.smoother_matrix(matrix, 4, SmootherConfig("block_sor"))
    # Lower block triangular in the natural sweep order
    assert np.all(np.triu(W, 4) == 0.0)
    np.testing.assert_array_equal(W + W.T - matrix, theory.block_diagonal(matrix, 4))


def test_predicted_rate_bound():

    assert theory.predicted_rate_bound(4.0, 2, 2) == pytest.approx(1.0 / 3.0)


def test_theory_size_limits(constants):

    grid = build_icosahedral_hierarchy(3).finest
    vertical = build_vertical_grid(2, constants.depth())
    hatted = assemble_hatted(constant_profiles(grid, vertical), grid, vertical, 1.0)
    with pytest.raises(DenseCapExceededError):
        theory.theory_matrix(hatted)


def test_theory_needs_operators_without_advection(balanced_l1):

    with pytest.raises(ConfigurationError):
        theory.theory_matrix(balanced_l1["hatted"])
    with pytest.raises(ConfigurationError):
        theory.factorized_vertical_matrices(balanced_l1["hatted"])


def test_vertical_matrices_must_be_definite():

    matrices = VerticalGalerkinMatrices(
        np.eye(2), np.diag([1.0, 0.0]), np.eye(2), omega=1.0
    )
    with pytest.raises(NotPositiveDefiniteError):
        matrices.check_definiteness()
    assert matrices.to_dict()["n_r"] == 2
