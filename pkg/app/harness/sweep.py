"""Phase-transition sweeps over (n, N/n) grids."""

import math
from concurrent.futures import ThreadPoolExecutor

from app.config import settings
from app.diagnostics.record import TrajectoryRecorder
from app.diagnostics.recovery import check_ergodic_recovery, check_last_iterate_recovery
from app.exceptions import BudgetExceededError
from app.harness.models import CellResult, RecoveryReport, SweepConfig
from app.harness.monitoring import Metrics
from app.model.data import derive_seed, draw_instance, synthesize_dataset
from app.optim.trainer import run


def estimate_flops(m: int, n: int, N: int, T: int, trials: int) -> float:
    """Rough cost of a cell: one forward and one backward pass per iteration."""
    return 4.0 * trials * T * N * m * n


def check_budget(config: SweepConfig, max_cells: int | None = None, flop_ceiling: float | None = None) -> None:
    """Reject grids that are too large before any work starts.

    Raises:
        BudgetExceededError: Too many cells, or a cell above the FLOP ceiling
    """
    max_cells = max_cells or settings.max_cells
    flop_ceiling = flop_ceiling or settings.flop_ceiling
    cells = config.cells()
    if len(cells) > max_cells:
        raise BudgetExceededError(f"grid has {len(cells)} cells; limit is {max_cells}")
    for n, _, N in cells:
        flops = estimate_flops(config.m, n, N, config.T, config.trials_per_cell)
        if flops > flop_ceiling:
            raise BudgetExceededError(
                f"cell n={n}, N={N} needs ~{flops:.3g} FLOPs; ceiling is {flop_ceiling:.3g}"
            )


def trial_seed(master_seed: int, n: int, N: int, k: int) -> int:
    """Seed of trial k in cell (n, N); independent of every other cell."""
    return derive_seed(master_seed, n, N, k)


def run_trial(config: SweepConfig, n: int, N: int, seed: int) -> tuple[bool, bool]:
    """Draw a fresh instance and dataset, train, and apply both success checks.

    Returns:
        (ergodic success, last-iterate success)
    """
    spec = draw_instance(config.m, n, seed, config.v_kind)
    data = synthesize_dataset(spec, N, config.noise, seed)
    recorder = TrajectoryRecorder(spec, schedule=config.schedule, method=config.method)
    record = run(
        spec, data, config.schedule, config.init, config.T,
        recorder=recorder, seed=seed, method=config.method,
    )
    return (
        check_ergodic_recovery(record, config.T),
        check_last_iterate_recovery(record, config.T),
    )


def run_sweep(config: SweepConfig, workers: int | None = None) -> RecoveryReport:
    """Run every cell of the grid and aggregate success rates.

    Trials are independent work items; with ``workers > 1`` they run on a
    thread pool, and results are merged in cell and trial order so the
    report does not depend on scheduling.

    Args:
        config: Sweep configuration
        workers: Thread count (defaults to settings.workers)

    Returns:
        RecoveryReport with one CellResult per (n, N) cell

    Raises:
        BudgetExceededError: If the grid exceeds the cell or FLOP budget
    """
    check_budget(config)
    workers = workers or settings.workers

    metrics = Metrics("sweep")
    metrics.start()

    cells = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for n, ratio, N in config.cells():
            seeds = [trial_seed(config.master_seed, n, N, k) for k in range(config.trials_per_cell)]
            with metrics.stage(f"n={n},N={N}"):
                outcomes = list(pool.map(lambda s: run_trial(config, n, N, s), seeds))
            metrics.count("trials", len(seeds))
            ergodic = sum(1 for e, _ in outcomes if e)
            last = sum(1 for _, l in outcomes if l)
            cell = CellResult(
                n=n,
                ratio=ratio,
                N=N,
                trials=config.trials_per_cell,
                successes=ergodic if config.success_kind == "ergodic" else last,
                ergodic_successes=ergodic,
                last_iterate_successes=last,
                seeds=seeds,
            )
            print(f"[Sweep] n={n} N={N} ({config.success_kind}) rate={cell.rate:.2f}")
            cells.append(cell)

    metrics.end()
    metrics.record(cells=len(cells), trials_per_cell=config.trials_per_cell)
    metadata = {
        "config": config.model_dump(),
        "master_seed": config.master_seed,
        "wall_time_ms": metrics.get_total_time_ms(),
    }
    metrics.save_to_log({"config": metadata["config"]})
    return RecoveryReport(cells=cells, metadata=metadata)


def transition_threshold(
    report: RecoveryReport, n: int, level: float = 0.5, kind: str = "ergodic"
) -> int | None:
    """Smallest N in the grid whose success rate for ``kind`` reaches ``level``."""
    for cell in report.cells_for(n):
        if cell.rate_for(kind) >= level:
            return cell.N
    return None


def rates_monotone(report: RecoveryReport, n: int, kind: str = "ergodic") -> bool:
    """Statistical monotonicity in N for fixed n.

    Fails only when the largest-N rate is below the smallest-N rate by more
    than three binomial standard errors.
    """
    cells = report.cells_for(n)
    if len(cells) < 2:
        return True
    low, high = cells[0], cells[-1]
    p_low, p_high = low.rate_for(kind), high.rate_for(kind)
    se = math.sqrt(p_low * (1 - p_low) / low.trials + p_high * (1 - p_high) / high.trials)
    gap = p_low - p_high
    return gap <= 3.0 * se if se > 0 else gap <= 0.0


def failure_ceiling(
    report: RecoveryReport, n: int, level: float = 0.2, kind: str = "ergodic"
) -> int | None:
    """Largest N in the grid whose success rate for ``kind`` is still at or below ``level``."""
    below = [cell.N for cell in report.cells_for(n) if cell.rate_for(kind) <= level]
    return max(below) if below else None
