import numpy as np
import pytest

from lib import TimingModel
from lib.errors import DegenerateFitError


def test_exact_line_is_recovered():

    n_r = [16, 32, 64, 128]
    seconds = [1e-3 + 2e-5 * n for n in n_r]
    model = TimingModel(n_r, seconds)
    assert model.intercept == pytest.approx(1e-3, rel=1e-9)
    assert model.slope == pytest.approx(2e-5, rel=1e-9)
    assert model.r_squared == pytest.approx(1.0, abs=1e-12)
    assert model.predict(256) == pytest.approx(1e-3 + 2e-5 * 256)
    assert model.intercept_share(128) == pytest.approx(1e-3 / (1e-3 + 2e-5 * 128))


def test_noisy_samples():

    rng = np.random.default_rng(0)
    n_r = np.array([16, 32, 64, 128, 256])
    seconds = 5e-4 + 1e-5 * n_r + rng.normal(0.0, 1e-5, n_r.size)
    model = TimingModel(n_r, seconds)
    assert 0.0 <= model.r_squared <= 1.0
    document = model.to_dict()
    assert [sample["n_r"] for sample in document["samples"]] == n_r.tolist()
    assert document["reference_n_r"] == 128


def test_constant_times():

    model = TimingModel([16, 32, 64], [1.0, 1.0, 1.0])
    assert model.slope == pytest.approx(0.0, abs=1e-12)
    assert model.r_squared == 1.0


@pytest.mark.parametrize("n_r, seconds", [
    ([16, 32], [1.0, 2.0]),
    ([64, 64, 64], [1.0, 1.1, 1.2]),
    ([16, 32, 64], [1.0, 2.0])
])
def test_degenerate_samples(n_r, seconds):

    with pytest.raises(DegenerateFitError):
        TimingModel(n_r, seconds)
