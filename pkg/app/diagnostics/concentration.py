"""Empirical l_inf concentration of the surrogate gradient around its drift.

For every w in Q1 the surrogate gradient is close to (||v||^2/tau)(w - w*);
the deviation eps(w) = (||v||^2/tau)(w - w*) - g(w) shrinks like sqrt(n/N).
The sup of ||eps||_inf over probed w, divided by the per-coordinate drift
magnitude 2||v||^2/(tau sqrt(n)), is the perturbation-to-drift ratio rho.
"""

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.config import TAU, settings
from app.diagnostics.occupation import OccupationStats, cycle_length
from app.exceptions import BudgetExceededError, InvalidArgumentError
from app.model.data import make_rng, random_hypercube
from app.model.models import Dataset, NetworkSpec
from app.model.network import heaviside, is_quantized
from app.optim.gradient import drift_proxy, ste_gradient


class Probe(BaseModel):
    """Which points of Q1 to probe: all 2^n of them, or k uniform draws."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["exhaustive", "sampled"] = "exhaustive"
    k: int = Field(default=256, ge=1)
    seed: int = Field(default=0, ge=0)

    @classmethod
    def sampled(cls, k: int, seed: int = 0) -> "Probe":
        return cls(kind="sampled", k=k, seed=seed)


class DriftDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: float = TAU
    drift_magnitude: float
    delta_emp: float = Field(ge=0.0)
    rho_emp: float = Field(ge=0.0)
    probes: int
    argmax_w: np.ndarray
    reference_scale: float
    constant_ratio: float | None
    effective_sparsity: float
    cycle_length: int | None
    ergodic_error_bound: float | None
    min_decay_ratio: float | None
    occupation: OccupationStats | None = None

    def with_occupation(self, stats: OccupationStats) -> "DriftDiagnostics":
        return self.model_copy(update={"occupation": stats})

    def summary(self) -> dict:
        return {
            "tau": self.tau,
            "drift_magnitude": self.drift_magnitude,
            "delta_emp": self.delta_emp,
            "rho_emp": self.rho_emp,
            "probes": self.probes,
            "reference_scale": self.reference_scale,
            "constant_ratio": self.constant_ratio,
            "effective_sparsity": self.effective_sparsity,
            "cycle_length": self.cycle_length,
            "ergodic_error_bound": self.ergodic_error_bound,
            "min_decay_ratio": self.min_decay_ratio,
        }


def drift_magnitude(spec: NetworkSpec) -> float:
    """2 ||v||^2 / (tau sqrt(n)): drift size on a wrong-sign coordinate."""
    return 2.0 * spec.v_norm_sq / (TAU * math.sqrt(spec.n))


def drift_residual(w: np.ndarray, data: Dataset, spec: NetworkSpec | None = None) -> np.ndarray:
    """eps(w) = (||v||^2/tau)(w - w*) - g(w).

    Raises:
        InvalidArgumentError: If w is not a point of Q1
    """
    spec = spec or data.spec
    if not is_quantized(w) or np.asarray(w).shape != (spec.n,):
        raise InvalidArgumentError("drift_residual expects a point of Q1")
    return drift_proxy(w, spec.w_star, spec.v) - ste_gradient(w, data)


def enumerate_hypercube(n: int) -> np.ndarray:
    """All 2^n points of Q1, one per row, in binary-counter order."""
    codes = (np.arange(2**n)[:, None] >> np.arange(n)) & 1
    return np.where(codes == 1, 1.0, -1.0) / math.sqrt(n)


def probe_points(n: int, probe: Probe) -> np.ndarray:
    if probe.kind == "exhaustive":
        if n > settings.exhaustive_max_n:
            raise BudgetExceededError(
                f"exhaustive probing needs 2^{n} gradients; cap is n <= {settings.exhaustive_max_n}"
            )
        return enumerate_hypercube(n)
    rng = make_rng(probe.seed, n, probe.k)
    return np.stack([random_hypercube(n, rng) for _ in range(probe.k)])


def reference_scale(spec: NetworkSpec, sigma: float, N: int) -> float:
    """(||v||_1^2 + sigma ||v||_1) sqrt(n/N) / tau: the bound with unit constants."""
    l1 = float(np.abs(spec.v).sum())
    return (l1**2 + sigma * l1) * math.sqrt(spec.n / N) / TAU


def concentration_sup(
    spec: NetworkSpec, data: Dataset, probe: Probe = Probe()
) -> DriftDiagnostics:
    """Sup over probed w in Q1 of ||eps(w)||_inf, and the derived ratio rho.

    Args:
        spec: Problem instance
        data: Dataset for ``spec``
        probe: Exhaustive enumeration or k sampled points

    Returns:
        DriftDiagnostics with delta_emp, rho_emp and the theory comparators

    Raises:
        BudgetExceededError: Exhaustive probing with n above the cap
    """
    points = probe_points(spec.n, probe)
    delta = 0.0
    argmax = points[0]
    for w in points:
        deviation = float(np.abs(drift_residual(w, data, spec)).max())
        if deviation > delta:
            delta, argmax = deviation, w

    drift = drift_magnitude(spec)
    rho = delta / drift
    reference = reference_scale(spec, data.noise.effective_sigma, data.N)
    l1 = float(np.abs(spec.v).sum())
    return DriftDiagnostics(
        drift_magnitude=drift,
        delta_emp=delta,
        rho_emp=rho,
        probes=len(points),
        argmax_w=argmax,
        reference_scale=reference,
        constant_ratio=delta / reference if reference > 0 else None,
        effective_sparsity=l1 / math.sqrt(spec.v_norm_sq),
        cycle_length=cycle_length(rho),
        ergodic_error_bound=2.0 * rho / ((1.0 - rho) * math.sqrt(spec.n)) if rho < 0.5 else None,
        min_decay_ratio=2.0 * rho / (1.0 - 2.0 * rho) if rho < 0.5 else None,
    )


def squared_term_deviation(w: np.ndarray, w_star: np.ndarray, rows: np.ndarray) -> float:
    """||(tau/N) sum_i (1{z_i.w>0} - 1{z_i.w*>0}) 1{z_i.w>0} z_i - (w - w*)||_inf.

    Single-row concentration of the dominant (squared) part of the surrogate
    gradient; ``rows`` is an (N, n) array of Gaussian vectors.
    """
    rows = np.asarray(rows, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    w_star = np.asarray(w_star, dtype=np.float64)
    on_w = heaviside(rows @ w)
    on_star = heaviside(rows @ w_star)
    weights = (on_w - on_star) * on_w
    estimate = TAU * (weights @ rows) / rows.shape[0]
    return float(np.abs(estimate - (w - w_star)).max())
