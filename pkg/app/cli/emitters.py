"""CSV and JSON persistence of reports, records and metadata sidecars."""

import json
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from app.diagnostics.record import RunRecord
from app.exceptions import EmissionError, InvalidArgumentError
from app.harness.models import ConcentrationTable, RecoveryReport

REPORT_COLUMNS = ["n", "N", "trials", "successes", "rate"]
RECORD_COLUMNS = ["t", "dist_l2", "hamming", "loss"]


def record_frame(record: RunRecord) -> pd.DataFrame:
    """Per-iteration series; ``loss`` is left empty when it was not tracked."""
    loss = record.loss if record.has_loss else np.full(record.T, np.nan)
    return pd.DataFrame(
        {
            "t": np.arange(1, record.T + 1),
            "dist_l2": record.dist_l2,
            "hamming": record.hamming,
            "loss": loss,
        },
        columns=RECORD_COLUMNS,
    )


def to_frame(result) -> pd.DataFrame:
    if isinstance(result, RecoveryReport):
        return result.to_frame()
    if isinstance(result, RunRecord):
        return record_frame(result)
    if isinstance(result, ConcentrationTable):
        return result.to_frame()
    raise InvalidArgumentError(f"cannot emit {type(result).__name__} as CSV")


def _prepare(path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise EmissionError(str(e), path) from e
    return path


def emit_csv(result: RecoveryReport | RunRecord | ConcentrationTable, path: Path) -> Path:
    """Write a report or record as CSV (UTF-8, LF, shortest round-trip floats).

    Raises:
        EmissionError: If the file cannot be written
    """
    path = _prepare(path)
    frame = to_frame(result)
    try:
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", na_rep="")
    except OSError as e:
        raise EmissionError(str(e), path) from e
    return path


def _write_json(payload: dict[str, Any], path: Path) -> Path:
    path = _prepare(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, sort_keys=True, default=str)
            f.write("\n")
    except OSError as e:
        raise EmissionError(str(e), path) from e
    return path


def metadata_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.name}.meta.json")


def emit_metadata(path: Path, metadata: dict[str, Any]) -> Path:
    """Write ``<path>.meta.json`` next to an artifact."""
    return _write_json(metadata, metadata_path(path))


def emit_json(record: RunRecord, path: Path, metadata: dict[str, Any] | None = None) -> Path:
    """Persist a RunRecord (sign history base64 bit-packed)."""
    return _write_json({"metadata": metadata or {}, "record": record.to_payload()}, path)


def emit_summary(summary: dict[str, Any], path: Path) -> Path:
    return _write_json(summary, path)


def load_record(path: Path) -> RunRecord:
    """Read a RunRecord written by emit_json.

    Raises:
        EmissionError: If the file cannot be read or is not a record
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
    except OSError as e:
        raise EmissionError(str(e), path) from e
    except json.JSONDecodeError as e:
        raise EmissionError(f"not valid JSON: {e}", path) from e
    if "record" not in payload:
        raise EmissionError("no 'record' entry", path)
    return RunRecord.from_payload(payload["record"])
