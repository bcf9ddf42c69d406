"""Seeded synthesis of problem instances and datasets.

Every random stream is derived from a 64-bit seed plus a tuple of integer
keys through ``numpy.random.SeedSequence``; streams for different keys are
independent, so a trial's draws never depend on which other trials ran.
"""

import math

import numpy as np

from app.model.models import Dataset, NetworkSpec, NoiseSpec
from app.model.network import outputs

_INSTANCE_STREAM = 0
_DATASET_STREAM = 1
_INIT_STREAM = 2

SEED_MAX = 2**64 - 1


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, keys)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """Child 64-bit seed for (seed, keys); stable across platforms."""
    state = np.random.SeedSequence(entropy=seed, spawn_key=tuple(keys)).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def random_hypercube(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from Q1."""
    signs = rng.integers(0, 2, size=n) * 2 - 1
    return signs.astype(np.float64) / math.sqrt(n)


def draw_instance(m: int, n: int, seed: int, v_kind: str = "gaussian") -> NetworkSpec:
    """Draw (v, w*): v i.i.d. N(0, 1) (or all ones), w* uniform on Q1.

    Args:
        m: Rows per sample
        n: Data dimension
        seed: 64-bit seed
        v_kind: "gaussian" or "ones"

    Returns:
        NetworkSpec for the instance
    """
    rng = make_rng(seed, _INSTANCE_STREAM)
    if v_kind == "gaussian":
        v = rng.standard_normal(m)
        while not np.any(v != 0.0):
            v = rng.standard_normal(m)
    elif v_kind == "ones":
        v = np.ones(m)
    else:
        raise ValueError(f"unknown v_kind '{v_kind}'")
    w_star = random_hypercube(n, rng)
    return NetworkSpec(m=m, n=n, v=v, w_star=w_star)


def synthesize_dataset(spec: NetworkSpec, N: int, noise: NoiseSpec, seed: int) -> Dataset:
    """Draw N Gaussian samples and their labels y_i = v^T theta(Z_i w*) + xi_i.

    Deterministic in (spec, N, noise, seed). Samples are drawn before the
    noise, so the same seed gives the same Z whatever the noise setting.

    Args:
        spec: Problem instance
        N: Number of samples (>= 1)
        noise: Label noise model
        seed: 64-bit seed

    Returns:
        Immutable Dataset
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    rng = make_rng(seed, _DATASET_STREAM)
    samples = rng.standard_normal((N, spec.m, spec.n))
    if noise.kind == "gaussian":
        noises = noise.sigma * rng.standard_normal(N)
    else:
        noises = np.zeros(N)
    labels = outputs(samples, spec.w_star, spec.v) + noises
    return Dataset(
        spec=spec, N=N, samples=samples, noises=noises, labels=labels, noise=noise, seed=seed
    )


def relabel(data: Dataset) -> np.ndarray:
    """Re-derive labels from the stored samples and noises."""
    return outputs(data.samples, data.spec.w_star, data.spec.v) + data.noises


def init_stream(seed: int) -> np.random.Generator:
    """Stream used for random latent initialisation."""
    return make_rng(seed, _INIT_STREAM)
