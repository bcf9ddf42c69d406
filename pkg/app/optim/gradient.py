"""ReLU straight-through surrogate gradient of the empirical loss."""

import numpy as np

from app.config import TAU
from app.exceptions import InvalidArgumentError
from app.model.models import Dataset
from app.model.network import heaviside, preactivations


def relu_derivative(x: np.ndarray) -> np.ndarray:
    """mu'(x) = 1{x >= 0}; coincides with the forward activation theta."""
    return heaviside(x)


def ste_gradient(w: np.ndarray, data: Dataset) -> np.ndarray:
    """Surrogate gradient (1/N) sum_i Z_i^T (mu'(Z_i w) * v) (v^T theta(Z_i w) - y_i).

    The reduction runs over samples in index order with a plain einsum loop,
    so identical inputs give bit-identical outputs.

    Args:
        w: Point of Q1 at which to evaluate
        data: Labelled dataset

    Returns:
        Gradient vector of length n

    Raises:
        InvalidArgumentError: If w does not match the dataset dimension
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (data.spec.n,):
        raise InvalidArgumentError(f"w must have shape ({data.spec.n},), got {w.shape}")
    pre = preactivations(data.samples, w)
    active = heaviside(pre)
    residual = (active * data.spec.v).sum(axis=-1) - data.labels
    mask = relu_derivative(pre)
    coefficients = mask * data.spec.v * residual[:, None]
    return np.einsum("imk,im->k", data.samples, coefficients, optimize=False) / data.N


def drift_proxy(w: np.ndarray, w_star: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Linear drift (||v||^2 / tau)(w - w*) that the surrogate gradient concentrates around."""
    return (float(np.dot(v, v)) / TAU) * (np.asarray(w) - np.asarray(w_star))
