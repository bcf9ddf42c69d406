"""Monte-Carlo checks of the expectation identity and of gradient symmetry."""

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.config import TAU
from app.exceptions import InvalidArgumentError
from app.model.data import derive_seed, make_rng, synthesize_dataset
from app.model.models import NetworkSpec, NoiseSpec
from app.model.network import is_quantized
from app.optim.gradient import ste_gradient

CHUNK_SIZE = 250_000


class ExpectationCheck(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    estimate: np.ndarray
    target: np.ndarray
    deviation: float
    samples: int


class SymmetryCheck(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    trials: int
    positive_frequency: np.ndarray
    zero_frequency: np.ndarray

    @property
    def any_zero(self) -> bool:
        return bool(np.any(self.zero_frequency > 0))


def expectation_identity_check(
    w: np.ndarray, w_star: np.ndarray, n: int, samples: int, seed: int
) -> ExpectationCheck:
    """Estimate E[(1{z.w>0} - 1{z.w*>0}) 1{z.w>0} z] over z ~ N(0, I_n).

    The exact value is (w - w*)/tau; ``deviation`` is the l_inf distance of
    the estimate from it.

    Args:
        w: Point of Q1
        w_star: Point of Q1
        n: Dimension
        samples: Number of Gaussian draws
        seed: 64-bit seed

    Returns:
        ExpectationCheck with estimate, target and deviation
    """
    w = np.asarray(w, dtype=np.float64)
    w_star = np.asarray(w_star, dtype=np.float64)
    if w.shape != (n,) or w_star.shape != (n,) or not (is_quantized(w) and is_quantized(w_star)):
        raise InvalidArgumentError("w and w_star must be points of Q1 in dimension n")
    if samples < 1:
        raise InvalidArgumentError(f"samples must be positive, got {samples}")

    rng = make_rng(seed, n)
    total = np.zeros(n)
    remaining = samples
    while remaining > 0:
        size = min(CHUNK_SIZE, remaining)
        z = rng.standard_normal((size, n))
        on_w = (z @ w > 0.0).astype(np.float64)
        on_star = (z @ w_star > 0.0).astype(np.float64)
        total += ((on_w - on_star) * on_w) @ z
        remaining -= size

    estimate = total / samples
    target = (w - w_star) / TAU
    return ExpectationCheck(
        estimate=estimate,
        target=target,
        deviation=float(np.abs(estimate - target).max()),
        samples=samples,
    )


def gradient_symmetry_check(
    spec: NetworkSpec, noise: NoiseSpec, N: int, trials: int, seed: int
) -> SymmetryCheck:
    """Sign statistics of G = -g(w*) over independent dataset draws.

    With symmetric continuous noise each G_p is nonzero almost surely and
    positive with probability 1/2; with sigma = 0 it is exactly zero.

    Args:
        spec: Problem instance held fixed across trials
        noise: Label noise model
        N: Samples per dataset
        trials: Number of dataset draws
        seed: 64-bit seed; trial k uses derive_seed(seed, k)

    Returns:
        SymmetryCheck with per-coordinate frequencies
    """
    if trials < 1:
        raise InvalidArgumentError(f"trials must be positive, got {trials}")
    positive = np.zeros(spec.n, dtype=np.int64)
    zero = np.zeros(spec.n, dtype=np.int64)
    for k in range(trials):
        data = synthesize_dataset(spec, N, noise, derive_seed(seed, k))
        G = -ste_gradient(spec.w_star, data)
        positive += G > 0.0
        zero += G == 0.0
    return SymmetryCheck(
        trials=trials,
        positive_frequency=positive / trials,
        zero_frequency=zero / trials,
    )
