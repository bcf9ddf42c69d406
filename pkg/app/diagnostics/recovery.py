"""Ergodic and last-iterate recovery checks, recurrence events."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.diagnostics.record import RunRecord
from app.exceptions import InvalidArgumentError
from app.model.network import quantize


class RecurrenceEvents(BaseModel):
    model_config = ConfigDict(frozen=True)

    visits: list[int]
    escapes: list[int]

    @property
    def visit_count(self) -> int:
        return len(self.visits)

    @property
    def escape_count(self) -> int:
        return len(self.escapes)

    @property
    def escape_frequency(self) -> float | None:
        """Fraction of visits followed by an escape within the run."""
        if not self.visits:
            return None
        return self.escape_count / self.visit_count


def _check_horizon(record: RunRecord, T: int) -> None:
    if T < 1:
        raise InvalidArgumentError(f"T must be positive, got {T}")
    if T > record.T:
        raise InvalidArgumentError(f"T={T} exceeds the recorded length {record.T}")


def ergodic_average(record: RunRecord, T: int) -> np.ndarray:
    """(1/T) sum_{t=1..T} w^t.

    Computed from integer sign counts, so every coordinate lies in
    [-1/sqrt(n), 1/sqrt(n)] exactly.
    """
    _check_horizon(record, T)
    positives = record.positive_mask()[:T].sum(axis=0)
    return ((2 * positives - T) / T) / math.sqrt(record.n)


def ergodic_error_series(record: RunRecord) -> np.ndarray:
    """||wbar^t - w*||_inf for t = 1..T."""
    if record.T == 0:
        return np.zeros(0)
    counts = np.cumsum(record.positive_mask(), axis=0)
    t = np.arange(1, record.T + 1)[:, None]
    averages = ((2 * counts - t) / t) / math.sqrt(record.n)
    return np.abs(averages - record.w_star).max(axis=1)


def check_ergodic_recovery(record: RunRecord, T: int) -> bool:
    """True iff Q(wbar^T) = w*."""
    return bool(np.array_equal(quantize(ergodic_average(record, T)), record.w_star))


def check_last_iterate_recovery(record: RunRecord, T: int) -> bool:
    """True iff w^T = w*."""
    _check_horizon(record, T)
    return bool(record.hamming[T - 1] == 0)


def recurrence_events(record: RunRecord) -> RecurrenceEvents:
    """Visits (w^t = w*, w^{t-1} != w*) and escapes (the reverse), t = 1..T."""
    hits = record.hamming == 0
    previous = np.empty_like(hits)
    if record.T:
        previous[0] = np.array_equal(record.initial_w, record.w_star)
        previous[1:] = hits[:-1]
    t = np.arange(1, record.T + 1)
    visits = t[hits & ~previous]
    escapes = t[~hits & previous]
    return RecurrenceEvents(visits=visits.tolist(), escapes=escapes.tolist())
