"""Occupation-time and cycle statistics of the per-coordinate sign dynamics.

Each coordinate's history is split into alternating phases in the correct
sign region (sign(w_j) = sign(w*_j)) and the incorrect one. When the
perturbation-to-drift ratio rho is below 1/2, an incorrect phase entered
from the correct region lasts one step, and the following correct phase
lasts at least ceil((1 - 2 rho) / rho) steps.
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.diagnostics.record import RunRecord

BURN_IN_RATIO = 0.9


class Phase(BaseModel):
    model_config = ConfigDict(frozen=True)

    correct: bool
    start: int
    length: int


class CoordinateOccupation(BaseModel):
    model_config = ConfigDict(frozen=True)

    coordinate: int
    correct_time: int
    incorrect_time: int
    incorrect_fraction: float
    phases: list[Phase]
    first_crossing: int | None
    burn_in: int | None
    incorrect_after_burn_in: dict[int, int]
    correct_after_burn_in: dict[int, int]

    @property
    def incorrect_events(self) -> int:
        """Number of incorrect-sign phases after burn-in."""
        return sum(self.incorrect_after_burn_in.values())


class OccupationStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    T: int
    rho: float
    cycle_length: int | None
    coordinates: list[CoordinateOccupation]

    @property
    def incorrect_fraction(self) -> float:
        """Mean fraction of incorrect time over coordinates."""
        if not self.coordinates:
            return 0.0
        return float(np.mean([c.incorrect_fraction for c in self.coordinates]))

    @property
    def max_incorrect_after_burn_in(self) -> int | None:
        lengths = [k for c in self.coordinates for k in c.incorrect_after_burn_in]
        return max(lengths) if lengths else None

    @property
    def min_correct_after_burn_in(self) -> int | None:
        lengths = [k for c in self.coordinates for k in c.correct_after_burn_in]
        return min(lengths) if lengths else None

    def one_step_reset_holds(self) -> bool:
        longest = self.max_incorrect_after_burn_in
        return longest is None or longest == 1

    def cycle_bound_holds(self, slack: int = 1) -> bool:
        """Every correct phase after burn-in lasts >= floor((1 - 2 rho) / rho) - slack."""
        shortest = self.min_correct_after_burn_in
        if shortest is None or not 0.0 < self.rho < 0.5:
            return True
        return shortest >= math.floor((1.0 - 2.0 * self.rho) / self.rho) - slack


def cycle_length(rho: float) -> int | None:
    """L = ceil((1 - 2 rho) / rho), defined for 0 < rho < 1/2."""
    if not 0.0 < rho < 0.5:
        return None
    return math.ceil((1.0 - 2.0 * rho) / rho)


def split_phases(correct: np.ndarray) -> list[Phase]:
    """Run-length encode a boolean series indexed from t = 1."""
    if correct.size == 0:
        return []
    boundaries = np.flatnonzero(correct[1:] != correct[:-1]) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [correct.size]))
    return [
        Phase(correct=bool(correct[s]), start=int(s) + 1, length=int(e - s))
        for s, e in zip(starts, ends)
    ]


def _histogram(lengths: list[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for length in sorted(lengths):
        counts[length] = counts.get(length, 0) + 1
    return counts


def occupation_stats(record: RunRecord, rho_emp: float) -> OccupationStats:
    """Per-coordinate phase statistics of a recorded run.

    Burn-in for coordinate j is the first t at which the schedule ratio
    eta_{t+1}/eta_t has reached 0.9 and the coordinate has crossed zero at
    least once. Only phases that start after burn-in and end before T enter
    the post-burn-in histograms; the whole history enters the time totals.

    Args:
        record: Recorded run
        rho_emp: Empirical perturbation-to-drift ratio (meaningful below 1/2)

    Returns:
        OccupationStats with one entry per coordinate
    """
    T = record.T
    correct_all = record.positive_mask() == (record.w_star > 0.0)
    initial_correct = (record.initial_w > 0.0) == (record.w_star > 0.0)
    stable_from = record.schedule.stabilization_index(BURN_IN_RATIO) if record.schedule else 1

    coordinates = []
    for j in range(record.n):
        correct = correct_all[:, j]
        phases = split_phases(correct)
        correct_time = int(np.count_nonzero(correct))

        previous = np.concatenate(([initial_correct[j]], correct[:-1])) if T else correct
        changes = np.flatnonzero(correct != previous)
        first_crossing = int(changes[0]) + 1 if changes.size else None
        burn_in = max(first_crossing, stable_from) if first_crossing is not None else None

        incorrect_lengths: list[int] = []
        correct_lengths: list[int] = []
        if burn_in is not None:
            for phase in phases:
                ends_before_horizon = phase.start + phase.length - 1 < T
                if phase.start > burn_in and ends_before_horizon:
                    (correct_lengths if phase.correct else incorrect_lengths).append(phase.length)

        coordinates.append(
            CoordinateOccupation(
                coordinate=j,
                correct_time=correct_time,
                incorrect_time=T - correct_time,
                incorrect_fraction=(T - correct_time) / T if T else 0.0,
                phases=phases,
                first_crossing=first_crossing,
                burn_in=burn_in,
                incorrect_after_burn_in=_histogram(incorrect_lengths),
                correct_after_burn_in=_histogram(correct_lengths),
            )
        )

    return OccupationStats(
        T=T, rho=rho_emp, cycle_length=cycle_length(rho_emp), coordinates=coordinates
    )
