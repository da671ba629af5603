import numpy as np
import pytest

from lib import (
    Field,
    assemble_hatted,
    apply_operator,
    residual,
    dense_assemble,
    dump_coordinate,
    constant_profiles
)
from lib.stencil import column_matrix, column_matrices
from lib.errors import (
    DenseCapExceededError,
    GridMismatchError,
    ShapeMismatchError,
    LevelMismatchError
)

from oracles import fv_matrix


@pytest.mark.parametrize("kind", ["full", "factorized", "partial"])
def test_assembly_matches_face_by_face_oracle(grids_l1, vertical4, balanced_l1, kind):

    profiles = balanced_l1[kind]
    omega = balanced_l1["params"].omega
    hatted = assemble_hatted(profiles, grids_l1.finest, vertical4, omega)
    expected = fv_matrix(profiles, grids_l1.finest, vertical4, omega)
    matrix = dense_assemble(hatted).toarray()
    np.testing.assert_allclose(matrix, expected, rtol=1e-12, atol=1e-14 * np.abs(expected).max())


def test_matrix_free_product_matches_assembly(balanced_l1):

    hatted = balanced_l1["hatted"]
    u = Field.random(hatted.shape, hatted.level_index, seed=3)
    matrix = dense_assemble(hatted)
    expected = (matrix @ u.values.ravel()).reshape(hatted.shape)
    np.testing.assert_allclose(apply_operator(hatted, u).values, expected, rtol=1e-12, atol=1e-14 * np.abs(expected).max())


def test_residual(balanced_l1):

    hatted = balanced_l1["hatted"]
    u = Field.random(hatted.shape, hatted.level_index, seed=1)
    f = Field.random(hatted.shape, hatted.level_index, seed=2)
    expected = f.values - apply_operator(hatted, u).values
    np.testing.assert_allclose(residual(hatted, u, f).values, expected, rtol=1e-12, atol=1e-14 * np.abs(expected).max())


def test_constants_only_see_the_mass_term(balanced_l1):

    # Diffusion and advection fluxes cancel on constant columns
    hatted = balanced_l1["hatted"]
    ones = Field(np.ones(hatted.shape), hatted.level_index)
    np.testing.assert_allclose(
        apply_operator(hatted, ones).values,
        hatted.fields["beta"].dense(),
        rtol=1e-9
    )


def test_advection_breaks_symmetry(balanced_l1):

    hatted = balanced_l1["hatted"]
    with_advection = dense_assemble(hatted).toarray()
    without = dense_assemble(hatted.without_advection()).toarray()
    scale = np.abs(without).max()
    assert np.abs(without - without.T).max() <= 1e-14 * scale
    assert np.abs(with_advection - with_advection.T).max() > 1e-10 * scale


def test_operator_without_advection_is_positive_definite(balanced_l1):

    matrix = dense_assemble(balanced_l1["hatted"].without_advection()).toarray()
    samples = np.random.default_rng(7).standard_normal((100, matrix.shape[0]))
    energies = np.einsum("ij,jk,ik->i", samples, matrix, samples)
    assert np.all(energies > 0.0)


def test_column_matrix_is_the_diagonal_block(balanced_l1):

    hatted = balanced_l1["hatted"]
    n_r = hatted.n_r
    matrix = dense_assemble(hatted).toarray()
    cell = 17
    column = column_matrix(hatted, cell)
    block = slice(cell * n_r, (cell + 1) * n_r)
    np.testing.assert_allclose(column.tridiagonal(), matrix[block, block], rtol=1e-12)
    assert column.b[-1] == 0.0
    assert column.c[0] == 0.0
    for j, neighbour in enumerate(column.neighbors):
        coupling = matrix[block, neighbour * n_r:(neighbour + 1) * n_r]
        np.testing.assert_allclose(np.diag(coupling), column.d[j], rtol=1e-12)
    a, _, _, _ = column_matrices(hatted)
    np.testing.assert_array_equal(a[cell], column.a)


def test_diagonal_dominance(balanced_l1):

    # Rows without advection are dominated by beta_hat > 0
    a, b, c, d = column_matrices(balanced_l1["hatted"].without_advection())
    off = np.abs(b) + np.abs(c) + np.abs(d).sum(axis=1)
    assert np.all(a > off)


def test_separable_coefficients_stay_separable(balanced_l1):

    fac = balanced_l1["hatted_fac"]
    assert fac.kind == "factorized"
    assert all(field.is_separable for field in fac.fields.values())
    assert fac.storage_size() < balanced_l1["hatted"].storage_size()


def test_omega_scales_the_fluxes(grids_l1, vertical4):

    grid = grids_l1.finest
    profiles = constant_profiles(grid, vertical4, xi_r=0.5)
    one = assemble_hatted(profiles, grid, vertical4, 1.0)
    two = assemble_hatted(profiles, grid, vertical4, 2.0)
    for name in ["alpha_s", "alpha_r", "xi_r"]:
        np.testing.assert_allclose(two.fields[name].dense(), 4.0 * one.fields[name].dense())
    np.testing.assert_array_equal(two.fields["beta"].dense(), one.fields["beta"].dense())
    # Boundary faces carry no vertical flux
    assert np.all(one.fields["alpha_r"].dense()[:, [0, -1]] == 0.0)


def test_dense_cap(balanced_l1):

    with pytest.raises(DenseCapExceededError):
        dense_assemble(balanced_l1["hatted"], cap=10)


def test_profiles_on_another_grid(grids_l2, vertical4, balanced_l1):

    with pytest.raises(GridMismatchError):
        assemble_hatted(balanced_l1["full"], grids_l2.finest, vertical4, 1.0)


def test_fields_are_checked(balanced_l1):

    hatted = balanced_l1["hatted"]
    with pytest.raises(ShapeMismatchError):
        apply_operator(hatted, Field.zeros((hatted.n_cells, hatted.n_r + 1), 1))
    with pytest.raises(LevelMismatchError):
        apply_operator(hatted, Field.zeros(hatted.shape, 0))


def test_dump_coordinate(tmp_path, constant_l1):

    _, hatted = constant_l1
    matrix = dense_assemble(hatted)
    path = tmp_path / "matrix.txt"
    dump_coordinate(matrix, str(path))
    table = np.loadtxt(path)
    assert table.shape == (matrix.nnz, 3)
    assert table[:, 2].sum() == pytest.approx(matrix.sum())
