# ===============================================
#                  profile_io.py
# -----------------------------------------------
# JSON persistence of profile sets.
# ===============================================

import base64
import json
import logging

import numpy as np

from .CoefficientField import CoefficientField
from .ProfileSet import make_profile_set
from .errors import (
    GridMismatchError, ShapeMismatchError, NonFiniteValueError,
    ConfigurationError
)
from .config import FORMAT_VERSION, PROFILE_LAYOUT, ENCODINGS, PROFILE_NAMES


def _encode(values, encoding):

    values = np.ascontiguousarray(values, dtype="<f8").ravel()
    if encoding == "base64-f64le":
        return base64.b64encode(values.tobytes()).decode("ascii")
    return values.tolist()


def _decode(data, encoding):

    if encoding == "base64-f64le":
        return np.frombuffer(base64.b64decode(data), dtype="<f8").astype(float)
    return np.asarray(data, dtype=float)


def save_profiles(profiles, path, encoding="decimal"):

    """
    Write a profile set to a JSON file.

    Full fields are stored as flat arrays with the vertical index running
    fastest, separable fields as their vertical vector and horizontal
    scalars.

    Parameters
    ----------
    profiles : ProfileSet
    path : str
    encoding : str
        "decimal" (JSON numbers) or "base64-f64le".

    """

    if encoding not in ENCODINGS:
        raise ConfigurationError(f"Unknown encoding '{encoding}'")
    arrays = {}
    for name, field in profiles.fields.items():
        if field.is_separable:
            arrays[name] = {
                "vertical": _encode(field.vertical_vector, encoding),
                "horizontal": _encode(field.horizontal, encoding)
            }
        else:
            arrays[name] = {"values": _encode(field.vertical, encoding)}
    document = {
        "format_version": FORMAT_VERSION,
        "kind": profiles.kind,
        "grid": {
            "type": "icosahedral",
            "level": profiles.level_index,
            "n_r": profiles.n_r,
            "n_cells": profiles.n_cells,
            "n_edges": profiles.n_edges,
            "fingerprint": profiles.fingerprint
        },
        "layout": PROFILE_LAYOUT,
        "encoding": encoding,
        "arrays": arrays
    }
    with open(path, "w") as profile_file:
        profile_file.write(json.dumps(document))
    logging.info(f"PROFILES SAVED -> {path} ({profiles.kind}, {encoding})")


def load_profiles(path, grid=None, vertical=None):

    """
    Read a profile set written by save_profiles.

    Parameters
    ----------
    path : str
    grid : HorizontalGrid, optional
        Active grid; its fingerprint and sizes must match the file. Without
        it the fingerprint is checked when the set is assembled on a grid.
    vertical : VerticalGrid, optional
        Active vertical grid; its n_r must match the file.

    Returns (ProfileSet)
    --------------------
    A full, factorized or mixed set, bit-identical to the saved one.
    Non-positive beta, alpha_s or interior alpha_r raise ConfigurationError.

    """

    with open(path) as profile_file:
        document = json.load(profile_file)
    header = document["grid"]
    if grid is not None and header["fingerprint"] != grid.fingerprint():
        raise GridMismatchError(
            f"Profile file {path} was written for grid "
            f"{header['fingerprint']}, active grid is {grid.fingerprint()}"
        )
    if vertical is not None and header["n_r"] != vertical.n_r:
        raise ShapeMismatchError(
            f"Profile file {path} has n_r = {header['n_r']}, "
            f"active grid has n_r = {vertical.n_r}"
        )
    if grid is not None and (
        header["n_cells"] != grid.n_cells or header["n_edges"] != grid.n_edges
    ):
        raise ShapeMismatchError(f"Profile file {path} has wrong grid sizes")

    n_r = header["n_r"]
    encoding = document.get("encoding", "decimal")
    fields = {}
    for name in PROFILE_NAMES:
        entry = document["arrays"][name]
        n_horizontal = header["n_edges"] if name == "alpha_s" else header["n_cells"]
        n_vertical = n_r if name in ("beta", "alpha_s") else n_r + 1
        if "values" in entry:
            values = _decode(entry["values"], encoding)
            if values.size != n_horizontal * n_vertical:
                raise ShapeMismatchError(
                    f"Profile {name} has {values.size} values, "
                    f"expected {n_horizontal * n_vertical}"
                )
            parts = [values]
        else:
            vertical_part = _decode(entry["vertical"], encoding)
            horizontal_part = _decode(entry["horizontal"], encoding)
            if (
                vertical_part.size != n_vertical
                or horizontal_part.size != n_horizontal
            ):
                raise ShapeMismatchError(f"Profile {name} has wrong sizes")
            parts = [horizontal_part, vertical_part]
        if not all(np.all(np.isfinite(part)) for part in parts):
            raise NonFiniteValueError(f"Profile {name} contains non-finite values")
        if len(parts) == 1:
            fields[name] = CoefficientField.full(
                parts[0].reshape(n_horizontal, n_vertical)
            )
        else:
            fields[name] = CoefficientField.separable(*parts)

    profiles = make_profile_set(
        fields,
        header["level"],
        header["fingerprint"],
        header["n_cells"],
        header["n_edges"],
        n_r
    )
    profiles.check_positivity()
    return profiles
