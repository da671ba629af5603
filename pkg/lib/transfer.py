# ===============================================
#                   transfer.py
# -----------------------------------------------
# Intergrid transfer between horizontal levels.
# Columns are transferred level by level, the
# vertical grid is never coarsened.
# ===============================================

import numpy as np
import scipy.sparse as sp

from .Field import Field
from .errors import LevelMismatchError, ConfigurationError
from .config import TRANSFERS


def prolongation_matrix(grid, kind="linear"):

    """
    Sparse prolongation from the cells of `grid` to their children.

    "linear": the center child copies its parent, the corner child at vertex
    v gets (2 u_T + u_T1 + u_T2) / 4 where T1 and T2 are the coarse
    neighbours across the two edges of T meeting at v. "constant": every
    child copies its parent.

    Returns (scipy.sparse.csr_matrix)
    ---------------------------------
    Shape (4 n_S, n_S).

    """

    if kind not in TRANSFERS:
        raise ConfigurationError(f"Unknown prolongation '{kind}'")
    n_cells = grid.n_cells
    cells = np.arange(n_cells)
    if kind == "constant":
        return sp.csr_matrix(
            (np.ones(4 * n_cells), (np.arange(4 * n_cells), np.repeat(cells, 4))),
            shape=(4 * n_cells, n_cells)
        )
    neighbors = grid.neighbors
    rows = [4 * cells + 3]
    cols = [cells]
    values = [np.ones(n_cells)]
    for corner in range(3):
        child = 4 * cells + corner
        # Local edges `corner` and `corner - 1` meet at vertex `corner`
        rows += [child, child, child]
        cols += [cells, neighbors[:, corner], neighbors[:, (corner + 2) % 3]]
        values += [
            np.full(n_cells, 0.5),
            np.full(n_cells, 0.25),
            np.full(n_cells, 0.25)
        ]
    return sp.csr_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
        shape=(4 * n_cells, n_cells)
    )


def _check_levels(field, expected):

    if field.level_index != expected:
        raise LevelMismatchError(
            f"Field lives on level {field.level_index}, expected {expected}"
        )


def sum_children(values):

    """Coarse column values as the sum over the four children."""

    n_cells = values.shape[0] // 4
    children = values.reshape(n_cells, 4, -1)
    return children[:, 0] + children[:, 1] + children[:, 2] + children[:, 3]


def restrict_field(fine, hierarchy, level):

    """
    Restriction from level + 1 to level by summing over the four children.

    Parameters
    ----------
    fine : Field
        Field on level + 1.
    hierarchy : GridHierarchy
    level : int

    Returns (Field)
    ---------------
    Field on level.

    """

    _check_levels(fine, level + 1)
    if hierarchy.grids[level + 1].n_cells != fine.shape[0]:
        raise LevelMismatchError("Field does not match the fine grid")
    return Field(sum_children(fine.values), level)


def prolongate_field(coarse, hierarchy, level, kind="linear"):

    """Prolongation of a field on level to level + 1."""

    _check_levels(coarse, level)
    matrix = prolongation_matrix(hierarchy.grids[level], kind)
    return Field(matrix @ coarse.values, level + 1)


def prolongate_constant(coarse, hierarchy, level):

    return prolongate_field(coarse, hierarchy, level, kind="constant")


def restrict_transpose(fine, hierarchy, level, kind="linear"):

    """Restriction with the transpose of the prolongation."""

    _check_levels(fine, level + 1)
    matrix = prolongation_matrix(hierarchy.grids[level], kind)
    return Field(matrix.T @ fine.values, level)
