"""Seeded multi-trial experiments built on the simulator and its diagnostics."""

from app.harness.experiments import (
    run_concentration_campaign,
    run_recurrence_experiment,
    run_training,
)
from app.harness.models import RecoveryReport, SweepConfig
from app.harness.sweep import run_sweep

__all__ = [
    "RecoveryReport",
    "SweepConfig",
    "run_concentration_campaign",
    "run_recurrence_experiment",
    "run_sweep",
    "run_training",
]
