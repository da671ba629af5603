# ===============================================
#                    theory.py
# -----------------------------------------------
# Dense verification of the convergence theory
# of tensor-product multigrid on small grids.
# ===============================================

import logging

import numpy as np
import scipy.linalg as la

from .Field import Field
from .VerticalGalerkinMatrices import VerticalGalerkinMatrices
from .PerturbationReport import PerturbationReport
from .stencil import dense_assemble
from .errors import (
    ConfigurationError,
    DenseCapExceededError,
    NotPositiveDefiniteError,
    ShapeMismatchError
)
from .config import (
    THEORY_MAX_CELLS,
    THEORY_MAX_NR,
    DECOUPLING_PAIRS,
    PERTURBATION_SLACK
)

SYMMETRY_TOL = 1e-10


def check_theory_size(hatted):

    if hatted.n_cells > THEORY_MAX_CELLS or hatted.n_r > THEORY_MAX_NR:
        raise DenseCapExceededError(
            f"Theory checks are limited to {THEORY_MAX_CELLS} cells and "
            f"{THEORY_MAX_NR} levels, got {hatted.shape}"
        )


def _check_no_advection(hatted):

    if np.any(hatted.fields["xi_r"].dense() != 0.0):
        raise ConfigurationError("Theory checks need operators without advection")


def _check_symmetric(matrix, name, scale=None):

    if scale is None:
        scale = np.abs(matrix).max()
    if np.abs(matrix - matrix.T).max() > SYMMETRY_TOL * scale:
        raise ConfigurationError(f"{name} is not symmetric")


def theory_matrix(hatted):

    """Dense matrix of an operator without advection on a desk instance."""

    check_theory_size(hatted)
    _check_no_advection(hatted)
    return dense_assemble(hatted).toarray()


def vertical_laplacian(weights):

    """
    Tridiagonal matrix with face weights w_0, ..., w_{n_r}:
    row k reads -w_k u_{k-1} + (w_k + w_{k+1}) u_k - w_{k+1} u_{k+1}.

    """

    weights = np.asarray(weights, dtype=float)
    n_r = weights.size - 1
    matrix = np.diag(weights[:-1] + weights[1:])
    off = np.arange(n_r - 1)
    matrix[off, off + 1] = -weights[1:-1]
    matrix[off + 1, off] = -weights[1:-1]
    return matrix


def factorized_vertical_matrices(fac_hatted):

    """
    Vertical Galerkin matrices of factorized hatted coefficients.

    M^r = diag(vertical factor of alpha_s_hat), B^r = diag(vertical factor of
    beta_hat), A^r the vertical Laplacian of the alpha_r_hat factor. The
    horizontal factors of beta_hat and alpha_r_hat must be proportional,
    the constant of proportionality (over omega^2) is absorbed into A^r.

    Parameters
    ----------
    fac_hatted : HattedCoefficients
        Factorized coefficients.

    Returns (VerticalGalerkinMatrices)
    ----------------------------------

    """

    fields = fac_hatted.fields
    if not all(field.is_separable for field in fields.values()):
        raise ConfigurationError("Vertical matrices need factorized coefficients")
    omega2 = fac_hatted.omega**2
    ratio = fields["alpha_r"].horizontal / (omega2 * fields["beta"].horizontal)
    normalization = float(ratio.mean())
    if np.ptp(ratio) > 1e-10 * abs(normalization):
        raise ConfigurationError(
            "Horizontal factors of beta and alpha_r are not proportional"
        )
    A_r = normalization * vertical_laplacian(fields["alpha_r"].vertical_vector)
    M_r = np.diag(fields["alpha_s"].vertical_vector)
    B_r = np.diag(fields["beta"].vertical_vector)
    logging.debug(
        f"VERTICAL MATRICES -> n_r = {A_r.shape[0]}, "
        f"normalization = {normalization:.6e}"
    )
    return VerticalGalerkinMatrices(
        A_r, M_r, B_r, fac_hatted.omega, normalization
    )


def horizontal_matrices(fac_hatted):

    """
    Horizontal matrices M^S = diag(horizontal factor of beta_hat) and A^S,
    the graph Laplacian weighted by the horizontal factor of alpha_s_hat
    over omega^2.

    Returns (tuple)
    ---------------
    (M_S, A_S), dense n_S x n_S arrays.

    """

    grid = fac_hatted.grid
    weights = fac_hatted.fields["alpha_s"].horizontal / fac_hatted.omega**2
    first, second = grid.edge_cells[:, 0], grid.edge_cells[:, 1]
    A_S = np.zeros((grid.n_cells, grid.n_cells))
    np.add.at(A_S, (first, first), weights)
    np.add.at(A_S, (second, second), weights)
    np.add.at(A_S, (first, second), -weights)
    np.add.at(A_S, (second, first), -weights)
    M_S = np.diag(fac_hatted.fields["beta"].horizontal)
    return M_S, A_S


def kron_operator(vertical_matrices, M_S, A_S):

    """M^S kron (omega^2 A^r + B^r) + omega^2 A^S kron M^r."""

    omega2 = vertical_matrices.omega**2
    return (
        np.kron(M_S, vertical_matrices.operator())
        + omega2 * np.kron(A_S, vertical_matrices.M_r)
    )


def vertical_eigendecomposition(vertical_matrices):

    """
    Solve (omega^2 A^r + B^r) e_j = lambda_j M^r e_j.

    Returns (tuple)
    ---------------
    (lambdas, vectors) with ascending lambdas and M^r-orthonormal columns.

    """

    vertical_matrices.check_definiteness()
    lambdas, vectors = la.eigh(vertical_matrices.operator(), vertical_matrices.M_r)
    if lambdas.min() <= 0.0:
        raise NotPositiveDefiniteError("Vertical eigenvalues must be positive")
    return lambdas, vectors


def coupling_matrix(matrix, vectors, u, v):

    """
    C_kj = <e_k kron u, A (e_j kron v)> for all pairs of vertical
    eigenvectors. With (T, k) ordering e_j kron v is np.kron(v, e_j).

    """

    U = np.kron(u[:, None], vectors)
    V = np.kron(v[:, None], vectors)
    return U.T @ matrix @ V


def check_subspace_decoupling(matrix, vectors, n_pairs=DECOUPLING_PAIRS, seed=0):

    """
    Largest coupling between different vertical eigenvectors.

    Parameters
    ----------
    matrix : numpy.ndarray
        Dense operator of size n_S n_r.
    vectors : numpy.ndarray
        Vertical eigenvectors as columns.
    n_pairs : int
        Number of random horizontal pairs (u, v).
    seed : int

    Returns (float)
    ---------------
    max over pairs of max_{j != k} |C_kj| / max_j |C_jj|.

    """

    n_r = vectors.shape[0]
    if matrix.shape[0] % n_r:
        raise ShapeMismatchError("Operator size is not a multiple of n_r")
    n_cells = matrix.shape[0] // n_r
    rng = np.random.default_rng(seed)
    coupling = 0.0
    for _ in range(n_pairs):
        u = rng.standard_normal(n_cells)
        v = rng.standard_normal(n_cells)
        C = coupling_matrix(matrix, vectors, u, v)
        scale = np.abs(np.diag(C)).max()
        off_diagonal = np.abs(C - np.diag(np.diag(C))).max()
        coupling = max(coupling, off_diagonal / scale)
    logging.info(f"SUBSPACE DECOUPLING -> max coupling {coupling:.3e}")
    return float(coupling)


def _square_roots(matrix):

    _check_symmetric(matrix, "Reference operator")
    eigenvalues, Q = la.eigh(matrix)
    if eigenvalues.min() <= 0.0:
        raise NotPositiveDefiniteError("Reference operator is not positive definite")
    root = np.sqrt(eigenvalues)
    return (Q * root) @ Q.T, (Q / root) @ Q.T


def energy_norm_delta(fac_matrix, delta_matrix):

    """
    ||A_fac^{-1} dA|| in the A_fac norm, computed as the largest eigenvalue
    magnitude of A_fac^{-1/2} dA A_fac^{-1/2}.

    """

    # The perturbation may be pure roundoff, measure it against A_fac
    _check_symmetric(delta_matrix, "Perturbation", np.abs(fac_matrix).max())
    _, inverse_root = _square_roots(fac_matrix)
    symmetrized = inverse_root @ delta_matrix @ inverse_root
    symmetrized = 0.5 * (symmetrized + symmetrized.T)
    return float(np.abs(la.eigvalsh(symmetrized)).max())


def energy_norm(fac_matrix, iteration):

    """||A^{1/2} E A^{-1/2}||_2."""

    root, inverse_root = _square_roots(fac_matrix)
    return float(np.linalg.norm(root @ iteration @ inverse_root, 2))


def preconditioner_matrix(action, shape, level_index):

    """Explicit matrix of a linear map on fields, one unit vector at a time."""

    size = shape[0] * shape[1]
    matrix = np.empty((size, size))
    for column in range(size):
        unit = np.zeros(size)
        unit[column] = 1.0
        matrix[:, column] = action(Field(unit.reshape(shape), level_index)).values.ravel()
    return matrix


def iteration_matrix(matrix, inverse):

    return np.eye(matrix.shape[0]) - inverse @ matrix


def measure_perturbation(full_hatted, fac_hierarchy, mu=1, slack=PERTURBATION_SLACK):

    """
    Separability defect and Richardson rates of the factorized
    preconditioner on a desk instance.

    Parameters
    ----------
    full_hatted : HattedCoefficients
        Operator of the system, without advection.
    fac_hierarchy : MultigridHierarchy
        Factorized multigrid, without advection, on the same grid.
    mu : int
        Cycles per preconditioner application.
    slack : float
        Additive slack of the pass criterion.

    Returns (PerturbationReport)
    ----------------------------
    rho_factorized is the A_fac-norm of the cycle iteration matrix and
    rho_full the spectral radius of the Richardson iteration matrix.

    """

    fac_hatted = fac_hierarchy.finest
    if full_hatted.shape != fac_hatted.shape:
        raise ShapeMismatchError("Full and factorized operators differ in shape")
    matrix = theory_matrix(full_hatted)
    fac_matrix = theory_matrix(fac_hatted)
    delta = energy_norm_delta(fac_matrix, matrix - fac_matrix)

    shape, level = fac_hatted.shape, fac_hatted.level_index
    one_cycle = preconditioner_matrix(lambda r: fac_hierarchy.apply(r, 1), shape, level)
    rho_factorized = energy_norm(fac_matrix, iteration_matrix(fac_matrix, one_cycle))
    if mu == 1:
        cycles = one_cycle
    else:
        cycles = preconditioner_matrix(
            lambda r: fac_hierarchy.apply(r, mu), shape, level
        )
    rho_full = float(np.abs(la.eigvals(iteration_matrix(matrix, cycles))).max())

    report = PerturbationReport(delta, rho_factorized, rho_full, mu, slack)
    logging.info(
        f"PERTURBATION -> delta = {delta:.4f}, rho_fac = {rho_factorized:.4f}, "
        f"rho_full = {rho_full:.4f}, bound = {report.bound:.4f}, "
        f"status = {report.status}"
    )
    return report


def block_diagonal(matrix, n_r):

    blocks = np.arange(matrix.shape[0]) // n_r
    return np.where(blocks[:, None] == blocks[None, :], matrix, 0.0)


def smoother_matrix(matrix, n_r, smoother):

    """
    Matrix W of the line smoother u <- u + W^{-1} (f - A u).

    Block Jacobi: W = D / rho. Block SOR: W = D / rho + L with L the
    couplings to columns updated earlier in the sweep.

    """

    diagonal = block_diagonal(matrix, n_r)
    W = diagonal / smoother.rho_relax
    if smoother.kind == "block_sor":
        blocks = np.arange(matrix.shape[0]) // n_r
        if smoother.order == "reversed":
            earlier = blocks[:, None] < blocks[None, :]
        else:
            earlier = blocks[:, None] > blocks[None, :]
        W = W + np.where(earlier, matrix, 0.0)
    return W


def check_smoothing_property(matrix, n_r, smoother):

    """
    Smallest eigenvalue of W - A for block Jacobi and of W + W^T - A for
    block SOR, where W is the smoother matrix. Non-negative values mean
    the smoother satisfies A <= W (in the symmetrized sense for SOR).

    Parameters
    ----------
    matrix : numpy.ndarray
        Symmetric dense operator.
    n_r : int
    smoother : SmootherConfig

    Returns (float)
    ---------------

    """

    _check_symmetric(matrix, "Level operator")
    W = smoother_matrix(matrix, n_r, smoother)
    if smoother.kind == "block_sor":
        difference = W + W.T - matrix
    else:
        difference = W - matrix
    difference = 0.5 * (difference + difference.T)
    return float(la.eigvalsh(difference).min())


def jacobi_relaxation_bound(matrix, n_r):

    """Largest rho_relax with D / rho_relax >= A, i.e. 1 / lambda_max(D^{-1} A)."""

    _check_symmetric(matrix, "Level operator")
    eigenvalues = la.eigh(
        matrix, block_diagonal(matrix, n_r), eigvals_only=True
    )
    return float(1.0 / eigenvalues.max())


def predicted_rate_bound(C_A, nu_pre, nu_post):

    """Factorized V-cycle rate C_A / (C_A + 2 (nu_pre + nu_post))."""

    return C_A / (C_A + 2.0 * (nu_pre + nu_post))
