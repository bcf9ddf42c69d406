import math

import numpy as np
import pytest

from app.config import TAU
from app.exceptions import InvalidArgumentError
from app.model.data import draw_instance, make_rng, random_hypercube, synthesize_dataset
from app.model.models import Dataset, NetworkSpec, NoiseSpec
from app.model.network import empirical_loss
from app.optim.gradient import drift_proxy, relu_derivative, ste_gradient
from tests import oracles


def random_small_case(seed: int):
    rng = make_rng(1000, seed)
    n, m, N = (int(k) for k in rng.integers(1, 7, size=3))
    spec = draw_instance(m, n, seed)
    data = synthesize_dataset(spec, N, NoiseSpec(kind="gaussian", sigma=0.5), seed)
    return spec, data, random_hypercube(n, rng)


@pytest.mark.parametrize("seed", range(60))
def test_matches_term_by_term_oracle(seed):
    spec, data, w = random_small_case(seed)
    args = (w.tolist(), data.samples.tolist(), data.labels.tolist(), spec.v.tolist())

    np.testing.assert_allclose(
        ste_gradient(w, data), oracles.surrogate_gradient(*args), rtol=1e-10, atol=1e-12
    )
    assert empirical_loss(w, data) == pytest.approx(oracles.loss(*args), rel=1e-10, abs=1e-14)


def test_zero_at_optimum_noiseless(small_spec, small_data):
    g = ste_gradient(small_spec.w_star, small_data)
    np.testing.assert_array_equal(g, np.zeros(small_spec.n))


def test_single_active_row():
    w = oracles.hypercube_point([1, -1])
    z = np.array([0.8, 0.3])
    spec = NetworkSpec(m=1, n=2, v=[1.0], w_star=w)
    data = Dataset(spec=spec, N=1, samples=z.reshape(1, 1, 2), noises=[0.0], labels=[0.0])
    np.testing.assert_allclose(ste_gradient(w, data), z, rtol=0, atol=1e-15)


def test_inactive_rows_contribute_nothing():
    w = oracles.hypercube_point([1, 1])
    spec = NetworkSpec(m=1, n=2, v=[2.0], w_star=w)
    samples = np.array([[[-1.0, -1.0]]])
    data = Dataset(spec=spec, N=1, samples=samples, noises=[0.0], labels=[5.0])
    np.testing.assert_array_equal(ste_gradient(w, data), np.zeros(2))


def test_shape_mismatch(small_data):
    with pytest.raises(InvalidArgumentError):
        ste_gradient(np.ones(small_data.spec.n + 1), small_data)


def test_bit_identical_on_repeat(noisy_data):
    w = -noisy_data.spec.w_star
    np.testing.assert_array_equal(ste_gradient(w, noisy_data), ste_gradient(w, noisy_data))


def test_relu_derivative_matches_activation():
    x = np.array([-1.0, 0.0, 2.0])
    np.testing.assert_array_equal(relu_derivative(x), [0.0, 1.0, 1.0])


def test_drift_proxy():
    w_star = oracles.hypercube_point([1, 1, 1, 1])
    w = oracles.hypercube_point([-1, 1, 1, 1])
    v = np.array([1.0, 2.0])
    expected = (5.0 / TAU) * (w - w_star)
    np.testing.assert_allclose(drift_proxy(w, w_star, v), expected)
    assert drift_proxy(w, w_star, v)[0] == pytest.approx(-5.0 / TAU)
    assert TAU == pytest.approx(2.0 * math.sqrt(2.0 * math.pi))
