import math
import logging

import numpy as np

from .HorizontalGrid import HorizontalGrid
from .spherical import normalize
from .errors import ConfigurationError, LevelMismatchError
from .config import MAX_LEVELS


class GridHierarchy:

    """
    Nested icosahedral grids on levels 0 (coarsest) to L (finest).

    The four children of cell i on level l are the cells 4i, ..., 4i+3 on
    level l+1: three corner children at the vertices a, b, c of the parent
    followed by the center child.

    Attributes
    ----------
    grids : list of HorizontalGrid
        The grids, coarsest first.
    colinear_edges : list of numpy.ndarray
        For each level l < L, the two fine edges of level l+1 lying on every
        coarse edge of level l, shape (n_E, 2).

    Methods
    -------
    children(level)
        Child cells on level+1 of every cell on level.
    parents(level)
        Parent cell on level-1 of every cell on level.
    summary()
        Per-level quasi-uniformity statistics.

    """

    def __init__(self, grids, colinear_edges):

        """
        Parameters
        ----------
        grids : list of HorizontalGrid
            The grids, coarsest first.
        colinear_edges : list of numpy.ndarray
            Coarse edge to fine edge maps between consecutive levels.

        """

        self.grids = grids
        self.colinear_edges = colinear_edges


    @property
    def n_levels(self):

        return len(self.grids)


    @property
    def finest(self):

        return self.grids[-1]


    def children(self, level):

        if not 0 <= level < self.n_levels - 1:
            raise LevelMismatchError(f"Level {level} has no finer level")
        return np.arange(4 * self.grids[level].n_cells).reshape(-1, 4)


    def parents(self, level):

        if not 0 < level < self.n_levels:
            raise LevelMismatchError(f"Level {level} has no coarser level")
        return np.arange(self.grids[level].n_cells) // 4


    def summary(self):

        return [grid.summary() for grid in self.grids]


def _icosahedron():

    # Poles at +z and -z, two rings of five vertices in between
    ring = math.atan(0.5)
    vertices = [[0.0, 0.0, 1.0]]
    for i in range(5):
        lon = 2.0 * math.pi * i / 5.0
        vertices.append([
            math.cos(ring) * math.cos(lon),
            math.cos(ring) * math.sin(lon),
            math.sin(ring)
        ])
    for i in range(5):
        lon = 2.0 * math.pi * (i + 0.5) / 5.0
        vertices.append([
            math.cos(ring) * math.cos(lon),
            math.cos(ring) * math.sin(lon),
            -math.sin(ring)
        ])
    vertices.append([0.0, 0.0, -1.0])

    triangles = []
    for i in range(5):
        j = (i + 1) % 5
        triangles.append([0, 1 + i, 1 + j])
    for i in range(5):
        j = (i + 1) % 5
        triangles.append([1 + i, 6 + i, 1 + j])
        triangles.append([1 + j, 6 + i, 6 + j])
    for i in range(5):
        j = (i + 1) % 5
        triangles.append([11, 6 + j, 6 + i])

    return normalize(np.array(vertices)), np.array(triangles, dtype=np.int64)


def _refine(grid):

    # Midpoint of edge e gets vertex index n_V + e
    n_vertices = grid.vertices.shape[0]
    start = grid.vertices[grid.edge_vertices[:, 0]]
    end = grid.vertices[grid.edge_vertices[:, 1]]
    vertices = np.concatenate([grid.vertices, normalize(start + end)])

    a, b, c = grid.triangles.T
    ab, bc, ca = (n_vertices + grid.cell_edges).T
    children = np.stack(
        [
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1)
        ],
        axis=1
    )
    return vertices, children.reshape(-1, 3)


def _colinear_edges(coarse, fine):

    n_coarse_vertices = coarse.vertices.shape[0]
    n_fine_vertices = fine.vertices.shape[0]
    midpoints = n_coarse_vertices + np.arange(coarse.n_edges)
    keys = (
        fine.edge_vertices[:, 0].astype(np.int64) * n_fine_vertices
        + fine.edge_vertices[:, 1]
    )
    halves = []
    for end in range(2):
        # Coarse vertices are numbered below every midpoint
        wanted = coarse.edge_vertices[:, end] * n_fine_vertices + midpoints
        halves.append(np.searchsorted(keys, wanted))
    return np.stack(halves, axis=1)


def build_icosahedral_hierarchy(levels):

    """
    Build the icosahedral grids on levels 0, ..., levels.

    Parameters
    ----------
    levels : int
        Index L of the finest level.

    Returns (GridHierarchy)
    -----------------------
    Hierarchy with 20 * 4^l cells on level l.

    """

    if not 0 <= levels <= MAX_LEVELS:
        raise ConfigurationError(
            f"Number of refinement levels must lie in [0, {MAX_LEVELS}], "
            f"got {levels}"
        )
    vertices, triangles = _icosahedron()
    grids = [HorizontalGrid(0, vertices, triangles)]
    colinear_edges = []
    for level in range(1, levels + 1):
        vertices, triangles = _refine(grids[-1])
        grids.append(HorizontalGrid(level, vertices, triangles))
        colinear_edges.append(_colinear_edges(grids[-2], grids[-1]))
        logging.debug(
            f"GRID LEVEL {level} -> {grids[-1].n_cells} cells, "
            f"{grids[-1].n_edges} edges"
        )
    return GridHierarchy(grids, colinear_edges)


def grid_summary(hierarchy):

    return hierarchy.summary()
