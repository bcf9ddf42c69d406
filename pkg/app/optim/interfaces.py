from typing import Protocol, runtime_checkable

import numpy as np


@runtime_checkable
class Recorder(Protocol):
    """Observer of an STE run; called once before the first step and once per step."""

    def start(self, x: np.ndarray, w: np.ndarray) -> None:
        ...

    def record(self, t: int, x: np.ndarray, w: np.ndarray) -> None:
        ...


@runtime_checkable
class RecordBuilder(Recorder, Protocol):
    """Recorder that can hand back an accumulated RunRecord."""

    def to_record(self):
        ...
