# ===============================================
#                   stencil.py
# -----------------------------------------------
# Matrix-free application of the operator and
# explicit assembly for verification.
# ===============================================

import logging

import numpy as np
import scipy.sparse as sp

from .ColumnMatrix import ColumnMatrix
from .Field import Field
from .kernels import _fill_column, fill_columns, apply_columns, residual_columns
from .errors import ShapeMismatchError, LevelMismatchError, DenseCapExceededError
from .config import DENSE_CAP


def check_field(hatted, field):

    if field.shape != hatted.shape:
        raise ShapeMismatchError(
            f"Field has shape {field.shape}, operator expects {hatted.shape}"
        )
    if field.level_index != hatted.level_index:
        raise LevelMismatchError(
            f"Field lives on level {field.level_index}, "
            f"operator on level {hatted.level_index}"
        )


def column_matrix(hatted, cell):

    """
    Rebuild the stencil of one column from the hatted coefficients.

        d_TT',k = -as_TT',k
        b_k     = -ar_{k+1} - xi_{k+1}
        c_k     = -ar_k + xi_k
        a_k     = beta_k - (b_k + c_k + sum_T' d_TT',k)

    Returns (ColumnMatrix)
    ----------------------
    The stencil of column `cell`.

    """

    n_r = hatted.n_r
    a = np.empty(n_r)
    b = np.empty(n_r)
    c = np.empty(n_r)
    d = np.empty((3, n_r))
    _fill_column(cell, *hatted.kernel_arguments()[1:], a, b, c, d)
    return ColumnMatrix(cell, a, b, c, d, hatted.grid.neighbors[cell].copy())


def column_matrices(hatted):

    """Stencils of all columns as arrays a, b, c of shape (n_S, n_r) and d."""

    n_cells, n_r = hatted.shape
    a = np.empty((n_cells, n_r))
    b = np.empty((n_cells, n_r))
    c = np.empty((n_cells, n_r))
    d = np.empty((n_cells, 3, n_r))
    fill_columns(*hatted.kernel_arguments()[1:], a, b, c, d)
    return a, b, c, d


def apply_operator(hatted, u):

    """
    Matrix-free product (A u)_T = A_T u_T + sum_T' A_TT' u_T'.

    Parameters
    ----------
    hatted : HattedCoefficients
    u : Field

    Returns (Field)
    ---------------
    A u on the same level.

    """

    check_field(hatted, u)
    out = np.empty(hatted.shape)
    apply_columns(*hatted.kernel_arguments(), u.values, out)
    return Field(out, u.level_index)


def residual(hatted, u, f):

    """f - A u, computed column by column."""

    check_field(hatted, u)
    check_field(hatted, f)
    out = np.empty(hatted.shape)
    residual_columns(*hatted.kernel_arguments(), u.values, f.values, out)
    return Field(out, u.level_index)


def dense_assemble(hatted, cap=DENSE_CAP):

    """
    Explicit sparse matrix of the operator, rows ordered as (T, k) with k
    running fastest.

    Parameters
    ----------
    hatted : HattedCoefficients
    cap : int
        Largest admissible n_S * n_r.

    Returns (scipy.sparse.csr_matrix)
    ---------------------------------
    The n_S n_r x n_S n_r matrix.

    """

    n_cells, n_r = hatted.shape
    size = n_cells * n_r
    if size > cap:
        raise DenseCapExceededError(
            f"Explicit matrix of size {size} exceeds the cap {cap}"
        )
    a, b, c, d = column_matrices(hatted)
    index = np.arange(size).reshape(n_cells, n_r)
    neighbor_index = (
        hatted.grid.neighbors[:, :, None] * n_r + np.arange(n_r)[None, None, :]
    )
    rows = [
        index.ravel(),
        index[:, :-1].ravel(),
        index[:, 1:].ravel(),
        np.repeat(index[:, None, :], 3, axis=1).ravel()
    ]
    cols = [
        index.ravel(),
        index[:, 1:].ravel(),
        index[:, :-1].ravel(),
        neighbor_index.ravel()
    ]
    data = [a.ravel(), b[:, :-1].ravel(), c[:, 1:].ravel(), d.ravel()]
    matrix = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size)
    )
    return matrix.tocsr()


def dump_coordinate(matrix, path):

    """Write a sparse matrix as lines `row col value`."""

    coordinate = sp.coo_matrix(matrix)
    table = np.column_stack([coordinate.row, coordinate.col, coordinate.data])
    np.savetxt(path, table, fmt=["%d", "%d", "%.17e"])
    logging.info(f"MATRIX DUMPED -> {path} ({coordinate.nnz} entries)")
