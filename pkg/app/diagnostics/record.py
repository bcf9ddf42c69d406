"""Trajectory record of an STE run and the recorder that builds it."""

import base64
import math
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.exceptions import InvalidArgumentError
from app.model.models import Dataset, NetworkSpec
from app.model.network import empirical_loss, sign
from app.optim.models import StepSchedule


class RunRecord(BaseModel):
    """Per-iteration artifacts of one run, t = 1..T.

    Signs of w^t are stored bit-packed (1 = positive), row-major (T, n).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    T: int = Field(ge=0)
    w_star: np.ndarray
    initial_w: np.ndarray
    final_x: np.ndarray
    hamming: np.ndarray
    dist_l2: np.ndarray
    loss: np.ndarray
    w_sum: np.ndarray
    visits: np.ndarray
    escapes: np.ndarray
    sign_bits: np.ndarray
    schedule: StepSchedule | None = None
    method: str = "ste"

    @field_validator(
        "w_star", "initial_w", "final_x", "dist_l2", "loss", "w_sum", mode="before"
    )
    @classmethod
    def as_float(cls, value):
        array = np.array(value, dtype=np.float64, copy=True)
        array.flags.writeable = False
        return array

    @field_validator("hamming", "visits", "escapes", mode="before")
    @classmethod
    def as_int(cls, value):
        array = np.array(value, dtype=np.int64, copy=True)
        array.flags.writeable = False
        return array

    @field_validator("sign_bits", mode="before")
    @classmethod
    def as_bits(cls, value):
        array = np.array(value, dtype=np.uint8, copy=True)
        array.flags.writeable = False
        return array

    @property
    def has_loss(self) -> bool:
        return self.loss.shape[0] == self.T

    def positive_mask(self) -> np.ndarray:
        """(T, n) boolean array, True where w^t_j > 0."""
        bits = np.unpackbits(self.sign_bits, count=self.T * self.n)
        return bits.reshape(self.T, self.n).astype(bool)

    def signs(self) -> np.ndarray:
        return np.where(self.positive_mask(), 1.0, -1.0)

    def iterates(self) -> np.ndarray:
        """(T, n) array of w^t."""
        return self.signs() / math.sqrt(self.n)

    def iterate(self, t: int) -> np.ndarray:
        if t == 0:
            return self.initial_w.copy()
        if not 1 <= t <= self.T:
            raise InvalidArgumentError(f"t must be in [0, {self.T}], got {t}")
        return self.iterates()[t - 1]

    def to_payload(self) -> dict[str, Any]:
        """JSON-ready dict; sign history is base64 of the packed bits."""
        return {
            "n": self.n,
            "T": self.T,
            "method": self.method,
            "schedule": self.schedule.model_dump() if self.schedule else None,
            "w_star": self.w_star.tolist(),
            "initial_w": self.initial_w.tolist(),
            "final_x": self.final_x.tolist(),
            "w_sum": self.w_sum.tolist(),
            "hamming": self.hamming.tolist(),
            "dist_l2": self.dist_l2.tolist(),
            "loss": self.loss.tolist(),
            "visits": self.visits.tolist(),
            "escapes": self.escapes.tolist(),
            "sign_bits": base64.b64encode(self.sign_bits.tobytes()).decode("ascii"),
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "RunRecord":
        bits = np.frombuffer(base64.b64decode(payload["sign_bits"]), dtype=np.uint8)
        schedule = payload.get("schedule")
        return cls(
            n=payload["n"],
            T=payload["T"],
            method=payload.get("method", "ste"),
            schedule=StepSchedule(**schedule) if schedule else None,
            w_star=payload["w_star"],
            initial_w=payload["initial_w"],
            final_x=payload["final_x"],
            w_sum=payload["w_sum"],
            hamming=payload["hamming"],
            dist_l2=payload["dist_l2"],
            loss=payload["loss"],
            visits=payload["visits"],
            escapes=payload["escapes"],
            sign_bits=bits,
        )


class TrajectoryRecorder:
    """Accumulates a RunRecord while a run is in progress.

    Args:
        spec: Problem instance (supplies w*)
        data: Dataset for per-iteration loss; None skips loss tracking
        schedule: Schedule echoed into the record
    """

    def __init__(
        self,
        spec: NetworkSpec,
        data: Dataset | None = None,
        schedule: StepSchedule | None = None,
        method: str = "ste",
    ):
        self.spec = spec
        self.data = data
        self.schedule = schedule
        self.method = method
        self._w_star_sign = sign(spec.w_star)
        self._initial_w: np.ndarray | None = None
        self._final_x: np.ndarray | None = None
        self._hamming: list[int] = []
        self._dist: list[float] = []
        self._loss: list[float] = []
        self._rows: list[np.ndarray] = []
        self._w_sum = np.zeros(spec.n)
        self._visits: list[int] = []
        self._escapes: list[int] = []
        self._at_optimum = False

    def start(self, x: np.ndarray, w: np.ndarray) -> None:
        self._initial_w = np.array(w, dtype=np.float64)
        self._final_x = np.array(x, dtype=np.float64)
        self._at_optimum = bool(np.array_equal(w, self.spec.w_star))

    def record(self, t: int, x: np.ndarray, w: np.ndarray) -> None:
        positive = w > 0.0
        distance = int(np.count_nonzero(np.where(positive, 1.0, -1.0) != self._w_star_sign))
        self._hamming.append(distance)
        self._dist.append(float(np.linalg.norm(w - self.spec.w_star)))
        if self.data is not None:
            self._loss.append(empirical_loss(w, self.data))
        self._rows.append(positive)
        self._w_sum += w
        hit = distance == 0
        if hit and not self._at_optimum:
            self._visits.append(t)
        elif self._at_optimum and not hit:
            self._escapes.append(t)
        self._at_optimum = hit
        self._final_x = np.array(x, dtype=np.float64)

    def to_record(self) -> RunRecord:
        if self._initial_w is None:
            raise InvalidArgumentError("recorder was never started")
        T = len(self._rows)
        rows = np.array(self._rows, dtype=bool).reshape(T, self.spec.n)
        return RunRecord(
            n=self.spec.n,
            T=T,
            w_star=self.spec.w_star,
            initial_w=self._initial_w,
            final_x=self._final_x,
            hamming=self._hamming,
            dist_l2=self._dist,
            loss=self._loss,
            w_sum=self._w_sum,
            visits=self._visits,
            escapes=self._escapes,
            sign_bits=np.packbits(rows.ravel()),
            schedule=self.schedule,
            method=self.method,
        )


def record_from_iterates(
    iterates: np.ndarray,
    w_star: np.ndarray,
    initial_w: np.ndarray | None = None,
) -> RunRecord:
    """Build a RunRecord from an explicit (T, n) sequence of Q1 points."""
    iterates = np.asarray(iterates, dtype=np.float64)
    w_star = np.asarray(w_star, dtype=np.float64)
    n = w_star.shape[0]
    spec = NetworkSpec(m=1, n=n, v=[1.0], w_star=w_star)
    recorder = TrajectoryRecorder(spec)
    if initial_w is None:
        initial_w = np.full(n, 1.0 / math.sqrt(n))
    recorder.start(np.asarray(initial_w), np.asarray(initial_w))
    for t, w in enumerate(iterates, start=1):
        recorder.record(t, w, w)
    return recorder.to_record()
