# ===============================================
#                   spherical.py
# -----------------------------------------------
# Measures on the unit sphere used by the grids.
# ===============================================

import numpy as np


def normalize(vectors):

    """
    Project vectors radially onto the unit sphere.

    Parameters
    ----------
    vectors : numpy.ndarray
        Array of shape (..., 3).

    Returns (numpy.ndarray)
    -----------------------
    Unit vectors of the same shape.

    """

    return vectors / np.linalg.norm(vectors, axis=-1, keepdims=True)


def arc_length(a, b):

    """
    Great-circle distance between unit vectors a and b (radian).

    The atan2 form is accurate for nearly coincident points, where the
    arccos of the dot product loses half of the digits.

    """

    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    return np.arctan2(cross, dot)


def triangle_area(a, b, c):

    """
    Area of the spherical triangles with unit vertices a, b and c.

    Uses L'Huilier's theorem for the spherical excess.

    Parameters
    ----------
    a, b, c : numpy.ndarray
        Arrays of shape (n, 3) holding the vertices.

    Returns (numpy.ndarray)
    -----------------------
    The n areas in steradian.

    """

    side_a = arc_length(b, c)
    side_b = arc_length(c, a)
    side_c = arc_length(a, b)
    s = 0.5 * (side_a + side_b + side_c)
    product = (
        np.tan(0.5 * s)
        * np.tan(0.5 * (s - side_a))
        * np.tan(0.5 * (s - side_b))
        * np.tan(0.5 * (s - side_c))
    )
    return 4.0 * np.arctan(np.sqrt(np.maximum(product, 0.0)))


def barycentric(points, a, b, c):

    """
    Spherical barycentric coordinates of points in the triangles (a, b, c).

    The coordinates solve points = la * a + lb * b + lc * c and are scaled
    to sum to one. A point lies inside the triangle iff all three are
    non-negative.

    Returns (numpy.ndarray)
    -----------------------
    Array of shape (n, 3).

    """

    frames = np.stack([a, b, c], axis=-1)
    weights = np.linalg.solve(frames, points[..., None])[..., 0]
    return weights / np.sum(weights, axis=-1, keepdims=True)


def latitude(points):

    return np.arcsin(np.clip(points[..., 2], -1.0, 1.0))
