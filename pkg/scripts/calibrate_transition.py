#!/usr/bin/env python3
"""Locate the noiseless ergodic recovery transition: where it fails and where it reaches 90%.

Usage:
    python scripts/calibrate_transition.py [n] [trials_per_cell] [ratios]

The result is written to <output_dir>/calibration.json. Its low point
(largest N with rate <= 0.2) and high point (first N with rate >= 0.9)
are the cells the phase-transition test asserts.
"""

import sys
from pathlib import Path

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.cli.emitters import emit_csv, emit_summary
from app.config import settings
from app.harness.models import SweepConfig
from app.harness.sweep import failure_ceiling, rates_monotone, run_sweep, transition_threshold

DEFAULT_RATIOS = [1, 2, 4, 8, 16, 25, 32, 50, 64]


def calibrate(n: int, trials: int, ratios: list[float]) -> dict:
    """Run the calibration grid for one n and report the thresholds."""
    config = SweepConfig(m=128, dims=[n], ratios=ratios, trials_per_cell=trials, T=500)
    print(f"Calibrating n={n} over N/n in {ratios} with {trials} trials per cell...")
    report = run_sweep(config, workers=settings.workers)

    out = Path(settings.output_dir)
    emit_csv(report, out / "calibration.csv")
    summary = {
        "n": n,
        "trials_per_cell": trials,
        "ratios": ratios,
        "ergodic_20_max": failure_ceiling(report, n, 0.2, "ergodic"),
        "ergodic_90": transition_threshold(report, n, 0.9, "ergodic"),
        "ergodic_50": transition_threshold(report, n, 0.5, "ergodic"),
        "last_iterate_50": transition_threshold(report, n, 0.5, "last_iterate"),
        "monotone": rates_monotone(report, n, "ergodic"),
        "rates": {str(c.N): c.rate_for("ergodic") for c in report.cells},
    }
    emit_summary(summary, out / "calibration.json")
    return summary


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 25
    trials = int(sys.argv[2]) if len(sys.argv) > 2 else 100
    ratios = [float(r) for r in sys.argv[3].split(",")] if len(sys.argv) > 3 else DEFAULT_RATIOS

    summary = calibrate(n, trials, ratios)
    print(f"\nErgodic rate <= 0.2 up to N = {summary['ergodic_20_max']}")
    print(f"Ergodic rate >= 0.9 first at N = {summary['ergodic_90']}")
    print(f"Ergodic rate >= 0.5 first at N = {summary['ergodic_50']}")
    print(f"Last-iterate rate >= 0.5 first at N = {summary['last_iterate_50']}")
    if summary["ergodic_90"] is None:
        print("No cell reached 0.9; extend the ratio grid.")
        sys.exit(1)


if __name__ == "__main__":
    main()
