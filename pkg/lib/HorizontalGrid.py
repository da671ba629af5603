import numpy as np

from .spherical import normalize, arc_length, triangle_area, latitude
from .kernels import fnv1a_64


class HorizontalGrid:

    """
    One level of the icosahedral grid on the unit sphere.

    Cells are spherical triangles. Every array is read-only once the grid is
    built, so a grid can be shared freely between hierarchies and solvers.

    Attributes
    ----------
    level_index : int
        Refinement level (0 is the icosahedron).
    vertices : numpy.ndarray
        Unit vectors of the triangle vertices, shape (n_V, 3).
    triangles : numpy.ndarray
        Vertex indices (a, b, c) of every cell, shape (n_S, 3).
    centers : numpy.ndarray
        Normalised vertex centroids r_T, shape (n_S, 3).
    areas : numpy.ndarray
        Spherical cell areas |T|, shape (n_S,).
    edge_vertices : numpy.ndarray
        Sorted vertex pair of every edge, shape (n_E, 2).
    edge_cells : numpy.ndarray
        Cell pair (T, T') of every edge with T < T', shape (n_E, 2).
    edge_lengths : numpy.ndarray
        Great-circle length |S_TT'| of every edge, shape (n_E,).
    edge_midpoints : numpy.ndarray
        Unit vector at the middle of every edge, shape (n_E, 3).
    edge_normals : numpy.ndarray
        Unit normal at the edge midpoint, tangent to the sphere and pointing
        from T to T', shape (n_E, 3).
    cell_edges : numpy.ndarray
        Edge index of the local edges (a, b), (b, c), (c, a) of every cell,
        shape (n_S, 3).
    neighbors : numpy.ndarray
        Cell across each local edge, shape (n_S, 3).

    Methods
    -------
    latitudes()
        Latitude of every cell center.
    edge_latitudes()
        Latitude of every edge midpoint.
    flux_factors()
        Geometric factor of the horizontal two-point flux on every edge.
    mean_center_distance()
        Mean great-circle distance between neighbouring cell centers.
    fingerprint()
        FNV-1a hash of the cell centers.
    summary()
        Dictionary with the quasi-uniformity statistics of the level.

    """

    def __init__(self, level_index, vertices, triangles):

        """
        Parameters
        ----------
        level_index : int
            Refinement level of the grid.
        vertices : numpy.ndarray
            Unit vectors of the vertices, shape (n_V, 3).
        triangles : numpy.ndarray
            Vertex indices of the cells, shape (n_S, 3).

        """

        self.level_index = level_index
        self.vertices = vertices
        self.triangles = triangles
        self._build_topology()
        self._build_geometry()
        for value in vars(self).values():
            if isinstance(value, np.ndarray):
                value.flags.writeable = False
        self._fingerprint = None


    @property
    def n_cells(self):

        return self.triangles.shape[0]


    @property
    def n_edges(self):

        return self.edge_vertices.shape[0]


    def _build_topology(self):

        n_cells = self.triangles.shape[0]
        half_edges = np.stack(
            [self.triangles, np.roll(self.triangles, -1, axis=1)],
            axis=-1
        )
        pairs = np.sort(half_edges.reshape(-1, 2), axis=1)
        self.edge_vertices, half_to_edge = np.unique(
            pairs,
            axis=0,
            return_inverse=True
        )
        self.cell_edges = half_to_edge.reshape(n_cells, 3)

        # On a closed surface every edge is shared by exactly two cells
        order = np.argsort(self.cell_edges.ravel(), kind="stable")
        owners = np.repeat(np.arange(n_cells), 3)
        self.edge_cells = owners[order].reshape(-1, 2)

        cells = np.arange(n_cells)[:, None]
        candidates = self.edge_cells[self.cell_edges]
        self.neighbors = np.where(
            candidates[..., 0] == cells,
            candidates[..., 1],
            candidates[..., 0]
        )


    def _build_geometry(self):

        corners = self.vertices[self.triangles]
        self.centers = normalize(corners.sum(axis=1))
        self.areas = triangle_area(corners[:, 0], corners[:, 1], corners[:, 2])

        start = self.vertices[self.edge_vertices[:, 0]]
        end = self.vertices[self.edge_vertices[:, 1]]
        self.edge_lengths = arc_length(start, end)
        self.edge_midpoints = normalize(start + end)

        normals = normalize(np.cross(self.edge_midpoints, end - start))
        chords = (
            self.centers[self.edge_cells[:, 1]]
            - self.centers[self.edge_cells[:, 0]]
        )
        flip = np.sum(normals * chords, axis=1) < 0.0
        normals[flip] *= -1.0
        self.edge_normals = normals


    def latitudes(self):

        return latitude(self.centers)


    def edge_latitudes(self):

        return latitude(self.edge_midpoints)


    def flux_factors(self):

        """
        Geometric factor |S_TT'| n_TT' . (r_T' - r_T) / |r_T' - r_T|^2.

        Returns (numpy.ndarray)
        -----------------------
        One positive value per edge, shape (n_E,).

        """

        chords = (
            self.centers[self.edge_cells[:, 1]]
            - self.centers[self.edge_cells[:, 0]]
        )
        projection = np.sum(self.edge_normals * chords, axis=1)
        return self.edge_lengths * projection / np.sum(chords**2, axis=1)


    def mean_center_distance(self):

        return float(np.mean(arc_length(
            self.centers[self.edge_cells[:, 0]],
            self.centers[self.edge_cells[:, 1]]
        )))


    def fingerprint(self):

        """
        FNV-1a 64-bit hash of the cell centers in canonical order.

        Returns (str)
        -------------
        16 lower-case hexadecimal digits.

        """

        if self._fingerprint is None:
            data = np.frombuffer(
                np.ascontiguousarray(self.centers, dtype="<f8").tobytes(),
                dtype=np.uint8
            )
            self._fingerprint = f"{int(fnv1a_64(data)):016x}"
        return self._fingerprint


    def summary(self):

        distances = arc_length(
            self.centers[self.edge_cells[:, 0]],
            self.centers[self.edge_cells[:, 1]]
        )
        return {
            "level": self.level_index,
            "cells": self.n_cells,
            "edges": self.n_edges,
            "min_area": float(self.areas.min()),
            "max_area": float(self.areas.max()),
            "total_area": float(self.areas.sum()),
            "min_edge_length": float(self.edge_lengths.min()),
            "max_edge_length": float(self.edge_lengths.max()),
            "mean_center_distance": float(distances.mean()),
            "spacing_ratio": float(distances.max() / distances.min())
        }
