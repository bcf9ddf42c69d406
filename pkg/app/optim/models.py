import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.model.network import quantize


class StepSchedule(BaseModel):
    """Step sizes eta_t = eta0 (constant) or eta0 * t^(-p) (power_decay), t >= 1."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["constant", "power_decay"] = "constant"
    eta0: float = Field(default=1.0, gt=0.0)
    p: float = Field(default=0.5, gt=0.0, le=1.0)

    def eta(self, t: int) -> float:
        if t < 1:
            raise ValueError(f"step sizes are indexed from t=1, got {t}")
        if self.kind == "constant":
            return self.eta0
        return self.eta0 * t ** (-self.p)

    def ratio(self, t: int) -> float:
        """eta_{t+1} / eta_t."""
        if self.kind == "constant":
            return 1.0
        return (t / (t + 1)) ** self.p

    def stabilization_index(self, threshold: float = 0.9) -> int:
        """First t >= 1 with eta_{t+1}/eta_t >= threshold."""
        if self.kind == "constant" or threshold <= 0.0:
            return 1
        if threshold >= 1.0:
            raise ValueError("a decaying schedule never reaches ratio 1")
        # (t/(t+1))^p >= thr  <=>  t >= 1 / (thr^(-1/p) - 1)
        t = max(1, math.ceil(1.0 / (threshold ** (-1.0 / self.p) - 1.0)))
        while self.ratio(t) < threshold:
            t += 1
        while t > 1 and self.ratio(t - 1) >= threshold:
            t -= 1
        return t


class InitSpec(BaseModel):
    """Latent initialisation x^0: zero, or uniform on [-c0/sqrt(n), c0/sqrt(n)]^n."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["zero", "bounded_uniform"] = "zero"
    c0: float = Field(default=1.0, ge=0.0)

    def draw(self, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros(n)
        if rng is None:
            raise ValueError("bounded_uniform initialisation needs a random generator")
        bound = self.c0 / math.sqrt(n)
        return rng.uniform(-bound, bound, size=n)


class TrainState(BaseModel):
    """Iterate (x^t, w^t = Q(x^t)) after t completed steps."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    w: np.ndarray
    t: int = Field(default=0, ge=0)
    schedule: StepSchedule = StepSchedule()

    @field_validator("x", "w", mode="before")
    @classmethod
    def as_vector(cls, value):
        array = np.array(value, dtype=np.float64, copy=True)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_quantized(self) -> "TrainState":
        if not np.array_equal(self.w, quantize(self.x)):
            raise ValueError("w must equal quantize(x)")
        return self

    @classmethod
    def initial(cls, x0: np.ndarray, schedule: StepSchedule) -> "TrainState":
        return cls(x=x0, w=quantize(x0), t=0, schedule=schedule)
