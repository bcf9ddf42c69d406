"""Single-run, recurrence and concentration-scaling experiments."""

import math

import numpy as np

from app.diagnostics.concentration import Probe, concentration_sup
from app.diagnostics.record import TrajectoryRecorder
from app.diagnostics.recovery import (
    check_ergodic_recovery,
    check_last_iterate_recovery,
    recurrence_events,
)
from app.exceptions import InvalidArgumentError
from app.harness.models import (
    ConcentrationRow,
    ConcentrationTable,
    RunSummary,
    TrainingResult,
)
from app.harness.monitoring import Metrics
from app.model.data import derive_seed, draw_instance, synthesize_dataset
from app.model.models import NoiseSpec
from app.optim.models import InitSpec, StepSchedule
from app.optim.trainer import run


def summarize(record, T: int) -> RunSummary:
    events = recurrence_events(record)
    return RunSummary(
        T=T,
        visits=events.visits,
        escapes=events.escapes,
        visit_count=events.visit_count,
        escape_count=events.escape_count,
        escape_frequency=events.escape_frequency,
        final_hamming=int(record.hamming[-1]),
        final_loss=float(record.loss[-1]) if record.has_loss else None,
        ergodic_recovered=check_ergodic_recovery(record, T),
        last_iterate_recovered=check_last_iterate_recovery(record, T),
    )


def run_training(
    m: int,
    n: int,
    N: int,
    noise: NoiseSpec,
    T: int,
    seed: int,
    schedule: StepSchedule = StepSchedule(),
    init: InitSpec = InitSpec(),
    method: str = "ste",
    v_kind: str = "gaussian",
) -> TrainingResult:
    """Draw one instance from ``seed``, train for T steps, record everything.

    Returns:
        TrainingResult with the full RunRecord (loss tracked) and its summary
    """
    spec = draw_instance(m, n, seed, v_kind)
    data = synthesize_dataset(spec, N, noise, seed)
    recorder = TrajectoryRecorder(spec, data, schedule=schedule, method=method)
    record = run(spec, data, schedule, init, T, recorder=recorder, seed=seed, method=method)
    summary = summarize(record, T)
    print(
        f"[Train] m={m} n={n} N={N} T={T}: visits={summary.visit_count} "
        f"escapes={summary.escape_count} final_hamming={summary.final_hamming}"
    )
    metadata = {
        "m": m, "n": n, "N": N, "T": T, "seed": seed,
        "noise": noise.model_dump(), "schedule": schedule.model_dump(),
        "init": init.model_dump(), "method": method, "v_kind": v_kind,
    }
    return TrainingResult(spec=spec, record=record, summary=summary, metadata=metadata)


def run_recurrence_experiment(
    m: int = 128,
    n: int = 25,
    N: int = 140,
    sigma: float = 1.0,
    T: int = 2000,
    seed: int = 0,
    schedule: StepSchedule = StepSchedule(),
    init: InitSpec = InitSpec(),
) -> TrainingResult:
    """One noisy run exposing repeated visits to and escapes from w*.

    ``sigma = 0`` falls back to the noiseless run, where w* is absorbing.

    Raises:
        InvalidArgumentError: If sigma is negative
    """
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be non-negative, got {sigma}")
    noise = NoiseSpec(kind="gaussian", sigma=sigma) if sigma > 0 else NoiseSpec()

    metrics = Metrics("recurrence")
    metrics.start()
    result = run_training(m, n, N, noise, T, seed, schedule, init)
    metrics.end()
    metrics.record(**result.summary.model_dump(exclude={"visits", "escapes"}))
    metrics.save_to_log(result.metadata)
    print(
        f"[Recurrence] {result.summary.visit_count} visits, "
        f"{result.summary.escape_count} escapes in {T} steps"
    )
    return result


def fit_loglog_slope(xs, ys) -> float | None:
    """Least-squares slope of log(y) against log(x); None with fewer than 2 points."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    keep = (xs > 0) & (ys > 0)
    if np.unique(xs[keep]).size < 2:
        return None
    slope, _ = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)
    return float(slope)


def run_concentration_campaign(
    n: int,
    m: int,
    v_kind: str,
    N_list: list[int],
    repeats: int,
    seed: int,
    sigma: float = 0.0,
    probe: Probe = Probe(),
) -> ConcentrationTable:
    """delta_emp statistics versus N on a fixed instance.

    The instance (v, w*) is drawn once from ``seed``; every (N, repeat) pair
    gets its own dataset stream. The fitted log-log slope of the median
    should sit near -1/2.

    Raises:
        BudgetExceededError: If exhaustive probing exceeds the enumeration cap
    """
    if repeats < 1 or not N_list:
        raise InvalidArgumentError("need at least one N and one repeat")
    spec = draw_instance(m, n, seed, v_kind)
    noise = NoiseSpec(kind="gaussian", sigma=sigma) if sigma > 0 else NoiseSpec()

    metrics = Metrics("concentration")
    metrics.start()
    rows = []
    for N in N_list:
        deltas, rhos = [], []
        for r in range(repeats):
            data = synthesize_dataset(spec, N, noise, derive_seed(seed, N, r))
            with metrics.stage(f"N={N}"):
                diagnostics = concentration_sup(spec, data, probe)
            metrics.count("datasets")
            deltas.append(diagnostics.delta_emp)
            rhos.append(diagnostics.rho_emp)
        values = np.array(deltas)
        rows.append(
            ConcentrationRow(
                N=N,
                repeats=repeats,
                median=float(np.median(values)),
                q10=float(np.quantile(values, 0.1)),
                q90=float(np.quantile(values, 0.9)),
                mean=float(values.mean()),
                minimum=float(values.min()),
                maximum=float(values.max()),
                rho_median=float(np.median(rhos)),
            )
        )
        print(f"[Concentration] N={N}: median delta={rows[-1].median:.4g}")

    slope = fit_loglog_slope([row.N for row in rows], [row.median for row in rows])
    metrics.end()
    metrics.record(slope=slope)
    metadata = {
        "n": n, "m": m, "v_kind": v_kind, "N_list": list(N_list), "repeats": repeats,
        "seed": seed, "sigma": sigma, "probe": probe.model_dump(),
        "v": spec.v.tolist(), "w_star": spec.w_star.tolist(),
        "wall_time_ms": metrics.get_total_time_ms(),
        "sqrt_n_over_N": [math.sqrt(n / N) for N in N_list],
    }
    metrics.save_to_log(metadata)
    return ConcentrationTable(rows=rows, slope=slope, metadata=metadata)
