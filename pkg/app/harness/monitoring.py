"""Run metrics: wall time, per-stage timings and counters, saved as JSON logs."""

import json
import time
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterator

from app.config import settings


class Metrics:
    """Collects and persists metrics for one experiment run.

    Wall time is measured with a monotonic clock; the start timestamp is
    kept only to name and date the log file.
    """

    def __init__(self, name: str = "run"):
        """Initialize metrics collector.

        Args:
            name: Experiment name used in the log file name
        """
        self.name = name
        self.started_at: datetime | None = None
        self._t0: float | None = None
        self._t1: float | None = None
        self.stages: Dict[str, float] = {}
        self.counters: Dict[str, int] = {}
        self.data: Dict[str, Any] = {}

    def start(self):
        self.started_at = datetime.now()
        self._t0 = time.perf_counter()

    def end(self):
        self._t1 = time.perf_counter()

    @contextmanager
    def stage(self, label: str) -> Iterator[None]:
        """Accumulate the time spent inside the block under ``label`` (ms)."""
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.stages[label] = self.stages.get(label, 0.0) + (time.perf_counter() - t0) * 1000.0

    def count(self, key: str, amount: int = 1):
        self.counters[key] = self.counters.get(key, 0) + amount

    def record(self, **kwargs):
        """
        Record result values (thresholds, slopes, visit counts, ...).

        Args:
            **kwargs: Metric key-value pairs
        """
        self.data.update(kwargs)

    def get_total_time_ms(self) -> int:
        if self._t0 is None or self._t1 is None:
            return 0
        return int((self._t1 - self._t0) * 1000)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment": self.name,
            "timestamp": self.started_at.isoformat() if self.started_at else None,
            "total_time_ms": self.get_total_time_ms(),
            "stages_ms": {k: round(v, 3) for k, v in self.stages.items()},
            "counters": dict(self.counters),
            **self.data,
        }

    def save_to_log(self, additional_data: Dict[str, Any] | None = None, logs_path: Path | None = None) -> str | None:
        """
        Write ``<logs_path>/<name>_<timestamp>.json``.

        Args:
            additional_data: Extra entries merged into the log (config, seeds)
            logs_path: Directory override (defaults to settings.logs_path)

        Returns:
            Path of the written log, or None when metrics saving is disabled
        """
        if not settings.save_metrics:
            return None

        log_data = self.to_dict()
        if additional_data:
            log_data.update(additional_data)

        directory = Path(logs_path or settings.logs_path)
        directory.mkdir(parents=True, exist_ok=True)
        stamp = self.started_at.strftime("%Y%m%d_%H%M%S_%f") if self.started_at else "unstarted"
        log_file = directory / f"{self.name}_{stamp}.json"

        with open(log_file, "w", encoding="utf-8") as f:
            json.dump(log_data, f, indent=2, default=str)

        print(f"[Monitoring] Metrics saved to {log_file}")
        return str(log_file)
