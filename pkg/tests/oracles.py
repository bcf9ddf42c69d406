"""Brute-force reference evaluations written as plain loops over terms."""

import numpy as np


def hypercube_point(signs) -> np.ndarray:
    """Point of Q1 with the given +-1 signs."""
    signs = np.asarray(signs, dtype=np.float64)
    return signs / np.sqrt(signs.shape[0])


def theta(value: float) -> float:
    return 1.0 if value >= 0.0 else 0.0


def row_products(Z, w):
    return [sum(Z[k][j] * w[j] for j in range(len(w))) for k in range(len(Z))]


def network_output(w, Z, v) -> float:
    pre = row_products(Z, w)
    return sum(v[k] * theta(pre[k]) for k in range(len(v)))


def loss(w, samples, labels, v) -> float:
    total = 0.0
    for Z, y in zip(samples, labels):
        r = network_output(w, Z, v) - y
        total += r * r
    return total / (2.0 * len(labels))


def surrogate_gradient(w, samples, labels, v) -> list[float]:
    n = len(w)
    grad = [0.0] * n
    for Z, y in zip(samples, labels):
        pre = row_products(Z, w)
        r = sum(v[k] * theta(pre[k]) for k in range(len(v))) - y
        for j in range(n):
            for k in range(len(v)):
                grad[j] += Z[k][j] * theta(pre[k]) * v[k] * r
    return [g / len(labels) for g in grad]
