import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _frozen_array(value, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=np.float64, copy=True)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    array.flags.writeable = False
    return array


class NetworkSpec(BaseModel):
    """Problem instance: shapes, fixed second layer v and ground truth w*."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(ge=1)
    n: int = Field(ge=1)
    v: np.ndarray
    w_star: np.ndarray

    @field_validator("v", "w_star", mode="before")
    @classmethod
    def as_vector(cls, value, info):
        return _frozen_array(value, 1, info.field_name)

    @model_validator(mode="after")
    def check_instance(self) -> "NetworkSpec":
        if self.v.shape != (self.m,):
            raise ValueError(f"v must have length m={self.m}, got {self.v.shape[0]}")
        if self.w_star.shape != (self.n,):
            raise ValueError(f"w_star must have length n={self.n}, got {self.w_star.shape[0]}")
        if not np.any(self.v != 0.0):
            raise ValueError("v must have at least one nonzero entry")
        scale = 1.0 / math.sqrt(self.n)
        if not np.all(np.isclose(np.abs(self.w_star), scale, rtol=0.0, atol=1e-12)):
            raise ValueError("every entry of w_star must be +-1/sqrt(n)")
        if abs(float(np.linalg.norm(self.w_star)) - 1.0) > 1e-12:
            raise ValueError("w_star must have unit l2 norm")
        # canonical representative so equality tests against quantize() are exact
        canonical = np.where(self.w_star >= 0.0, 1.0, -1.0) / math.sqrt(self.n)
        canonical.flags.writeable = False
        object.__setattr__(self, "w_star", canonical)
        return self

    @classmethod
    def from_arrays(cls, v, w_star) -> "NetworkSpec":
        v = np.asarray(v, dtype=np.float64)
        w_star = np.asarray(w_star, dtype=np.float64)
        return cls(m=v.shape[0], n=w_star.shape[0], v=v, w_star=w_star)

    @property
    def v_norm_sq(self) -> float:
        return float(np.dot(self.v, self.v))


class NoiseSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["none", "gaussian"] = "none"
    sigma: float = Field(default=0.0, ge=0.0)

    @property
    def effective_sigma(self) -> float:
        """Standard deviation actually applied (0 for kind='none')."""
        return self.sigma if self.kind == "gaussian" else 0.0


class Dataset(BaseModel):
    """N labelled samples (Z, xi, y) drawn for one NetworkSpec.

    Labels always satisfy ``labels = outputs(samples, w_star, v) + noises``
    bit for bit; see :func:`app.model.network.outputs`.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: NetworkSpec
    N: int = Field(ge=1)
    samples: np.ndarray
    noises: np.ndarray
    labels: np.ndarray
    noise: NoiseSpec = NoiseSpec()
    seed: int | None = None

    @field_validator("samples", mode="before")
    @classmethod
    def as_tensor(cls, value):
        return _frozen_array(value, 3, "samples")

    @field_validator("noises", "labels", mode="before")
    @classmethod
    def as_series(cls, value, info):
        return _frozen_array(value, 1, info.field_name)

    @model_validator(mode="after")
    def check_shapes(self) -> "Dataset":
        expected = (self.N, self.spec.m, self.spec.n)
        if self.samples.shape != expected:
            raise ValueError(f"samples must have shape {expected}, got {self.samples.shape}")
        if self.noises.shape != (self.N,) or self.labels.shape != (self.N,):
            raise ValueError(f"noises and labels must have length N={self.N}")
        return self
