import json

import numpy as np
import pytest

from lib import save_profiles, load_profiles, build_partial_factorization
from lib.errors import (
    GridMismatchError,
    ShapeMismatchError,
    NonFiniteValueError,
    ConfigurationError
)


def _assert_identical(loaded, saved):

    assert loaded.kind == saved.kind
    assert loaded.fingerprint == saved.fingerprint
    for name, field in saved.fields.items():
        assert loaded.fields[name].is_separable == field.is_separable
        np.testing.assert_array_equal(loaded.fields[name].horizontal, field.horizontal)
        np.testing.assert_array_equal(loaded.fields[name].vertical, field.vertical)


def test_full_profiles_round_trip_in_decimal(tmp_path, grids_l1, vertical4, balanced_l1):

    path = tmp_path / "full.json"
    save_profiles(balanced_l1["full"], str(path))
    document = json.loads(path.read_text())
    assert document["kind"] == "full"
    assert document["grid"]["n_cells"] == 80
    assert document["encoding"] == "decimal"
    _assert_identical(
        load_profiles(str(path), grids_l1.finest, vertical4), balanced_l1["full"]
    )


def test_mixed_profiles_round_trip_in_base64(tmp_path, balanced_l1):

    partial = build_partial_factorization(balanced_l1["full"], balanced_l1["factorized"])
    path = tmp_path / "partial.json"
    save_profiles(partial, str(path), encoding="base64-f64le")
    _assert_identical(load_profiles(str(path)), partial)


def test_profiles_of_another_grid_are_rejected(tmp_path, grids_l2, balanced_l1):

    path = tmp_path / "full.json"
    save_profiles(balanced_l1["full"], str(path))
    with pytest.raises(GridMismatchError):
        load_profiles(str(path), grids_l2.finest)


def test_profiles_with_another_n_r_are_rejected(tmp_path, grids_l1, vertical8, balanced_l1):

    path = tmp_path / "full.json"
    save_profiles(balanced_l1["full"], str(path))
    with pytest.raises(ShapeMismatchError):
        load_profiles(str(path), grids_l1.finest, vertical8)


def test_truncated_arrays_are_rejected(tmp_path, balanced_l1):

    path = tmp_path / "full.json"
    save_profiles(balanced_l1["full"], str(path))
    document = json.loads(path.read_text())
    document["arrays"]["xi_r"]["values"].pop()
    path.write_text(json.dumps(document))
    with pytest.raises(ShapeMismatchError):
        load_profiles(str(path))


def test_non_finite_values_are_rejected(tmp_path, balanced_l1):

    path = tmp_path / "factorized.json"
    save_profiles(balanced_l1["factorized"], str(path))
    document = json.loads(path.read_text())
    document["arrays"]["beta"]["vertical"][0] = float("nan")
    path.write_text(json.dumps(document))
    with pytest.raises(NonFiniteValueError):
        load_profiles(str(path))


def test_unknown_encoding(tmp_path, balanced_l1):

    with pytest.raises(ConfigurationError):
        save_profiles(balanced_l1["full"], str(tmp_path / "x.json"), encoding="hex")


@pytest.mark.parametrize("name", ["beta", "alpha_s", "alpha_r"])
def test_non_positive_coefficients_are_rejected(tmp_path, balanced_l1, name):

    path = tmp_path / "full.json"
    save_profiles(balanced_l1["full"], str(path))
    document = json.loads(path.read_text())
    # Entry 1 is an interior face for alpha_r
    document["arrays"][name]["values"][1] = -1.0
    path.write_text(json.dumps(document))
    with pytest.raises(ConfigurationError):
        load_profiles(str(path))
