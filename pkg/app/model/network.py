"""Forward model of the two-layer binary network.

All functions treat sign(0) = +1: the Heaviside activation maps 0 to 1
and the quantizer maps 0 to +1/sqrt(n), so theta(z.w) and Q(x) agree on
the boundary.
"""

import math

import numpy as np

from app.exceptions import InvalidArgumentError
from app.model.models import Dataset


def heaviside(x: np.ndarray) -> np.ndarray:
    """Binary activation theta(x) = 1{x >= 0}, returned as float64 0/1."""
    return (np.asarray(x) >= 0.0).astype(np.float64)


def sign(x: np.ndarray) -> np.ndarray:
    """Elementwise sign with sign(0) = +1."""
    return np.where(np.asarray(x) >= 0.0, 1.0, -1.0)


def quantize(x: np.ndarray) -> np.ndarray:
    """Project onto the scaled hypercube Q1 = {+-1/sqrt(n)}^n."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] == 0:
        raise InvalidArgumentError(f"quantize expects a non-empty vector, got shape {x.shape}")
    return sign(x) / math.sqrt(x.shape[0])


def is_quantized(w: np.ndarray) -> bool:
    w = np.asarray(w, dtype=np.float64)
    return bool(w.ndim == 1 and np.array_equal(w, quantize(w)))


def preactivations(samples: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Z w for one sample (m, n) or a stack of samples (N, m, n)."""
    if samples.shape[-1] != w.shape[0]:
        raise InvalidArgumentError(
            f"sample width {samples.shape[-1]} does not match weight length {w.shape[0]}"
        )
    return samples @ w


def outputs(samples: np.ndarray, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """v^T theta(Z w), reduced with a per-row sum so batched and single calls agree."""
    if samples.shape[-2] != v.shape[0]:
        raise InvalidArgumentError(
            f"sample rows {samples.shape[-2]} do not match second-layer length {v.shape[0]}"
        )
    return (heaviside(preactivations(samples, w)) * v).sum(axis=-1)


def forward(w: np.ndarray, Z: np.ndarray, v: np.ndarray) -> float:
    """Network output y(w; Z) = v^T theta(Z w) for a single (m, n) sample."""
    w = np.asarray(w, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if Z.ndim != 2 or w.ndim != 1 or v.ndim != 1:
        raise InvalidArgumentError(
            f"forward expects Z (m, n), w (n,), v (m,); got {Z.shape}, {w.shape}, {v.shape}"
        )
    return float(outputs(Z, w, v))


def residuals(w: np.ndarray, data: Dataset) -> np.ndarray:
    """Per-sample residuals v^T theta(Z_i w) - y_i."""
    return outputs(data.samples, np.asarray(w, dtype=np.float64), data.spec.v) - data.labels


def empirical_loss(w: np.ndarray, data: Dataset) -> float:
    """L(w) = (1/2N) sum_i (v^T theta(Z_i w) - y_i)^2."""
    r = residuals(w, data)
    return float(np.dot(r, r) / (2.0 * data.N))


def hamming(w: np.ndarray, w_star: np.ndarray) -> int:
    """Number of coordinates where the signs of w and w* disagree."""
    return int(np.count_nonzero(sign(w) != sign(w_star)))
