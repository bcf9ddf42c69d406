"""STE-gradient iteration in its two-step and single-step forms."""

from typing import Literal

import numpy as np

from app.diagnostics.record import RunRecord, TrajectoryRecorder
from app.exceptions import InvalidArgumentError
from app.model.data import init_stream
from app.model.models import Dataset, NetworkSpec
from app.model.network import quantize
from app.optim.gradient import ste_gradient
from app.optim.interfaces import RecordBuilder, Recorder
from app.optim.models import InitSpec, StepSchedule, TrainState

Method = Literal["ste", "projected"]


def step(state: TrainState, data: Dataset) -> TrainState:
    """One two-step update: x' = x - eta_{t+1} g(w), w' = Q(x')."""
    eta = state.schedule.eta(state.t + 1)
    x_next = state.x - eta * ste_gradient(state.w, data)
    return TrainState(x=x_next, w=quantize(x_next), t=state.t + 1, schedule=state.schedule)


def step_single(x: np.ndarray, t: int, schedule: StepSchedule, data: Dataset) -> np.ndarray:
    """Single-step form: x - eta_{t+1} g(Q(x))."""
    x = np.asarray(x, dtype=np.float64)
    return x - schedule.eta(t + 1) * ste_gradient(quantize(x), data)


def step_projected(w: np.ndarray, t: int, schedule: StepSchedule, data: Dataset) -> np.ndarray:
    """Projected-gradient baseline: Q(w - eta_{t+1} g(w)).

    There is no latent accumulator, so once eta * |g_j| < 1/sqrt(n) for every
    coordinate the iterate cannot move.
    """
    w = np.asarray(w, dtype=np.float64)
    return quantize(w - schedule.eta(t + 1) * ste_gradient(w, data))


def initial_state(
    spec: NetworkSpec, schedule: StepSchedule, init: InitSpec, seed: int = 0
) -> TrainState:
    rng = init_stream(seed) if init.kind == "bounded_uniform" else None
    return TrainState.initial(init.draw(spec.n, rng), schedule)


def run(
    spec: NetworkSpec,
    data: Dataset,
    schedule: StepSchedule,
    init: InitSpec,
    T: int,
    recorder: Recorder | None = None,
    seed: int = 0,
    method: Method = "ste",
) -> RunRecord | None:
    """Run T iterations of STE training from ``init``.

    Args:
        spec: Problem instance
        data: Dataset generated for ``spec``
        schedule: Step-size schedule
        init: Latent initialisation
        T: Number of iterations (>= 1)
        recorder: Observer called with (t, x, w) after every step; defaults to
            a TrajectoryRecorder tracking loss on ``data``
        seed: Seed for random initialisation
        method: "ste" (latent accumulator) or "projected" (baseline)

    Returns:
        The accumulated RunRecord, or None when a custom recorder cannot build one

    Raises:
        InvalidArgumentError: If T < 1 or the dataset does not belong to ``spec``
    """
    if T < 1:
        raise InvalidArgumentError(f"T must be >= 1, got {T}")
    if data.spec.n != spec.n or data.spec.m != spec.m:
        raise InvalidArgumentError("dataset shape does not match the network spec")
    if recorder is None:
        recorder = TrajectoryRecorder(spec, data, schedule=schedule, method=method)

    state = initial_state(spec, schedule, init, seed)
    recorder.start(state.x, state.w)
    if method == "ste":
        for _ in range(T):
            state = step(state, data)
            recorder.record(state.t, state.x, state.w)
    elif method == "projected":
        w = state.w
        for t in range(T):
            w = step_projected(w, t, schedule, data)
            recorder.record(t + 1, w, w)
    else:
        raise InvalidArgumentError(f"unknown method '{method}'")

    return recorder.to_record() if isinstance(recorder, RecordBuilder) else None
