from typing import Any, Literal

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.diagnostics.record import RunRecord
from app.model.models import NetworkSpec, NoiseSpec
from app.optim.models import InitSpec, StepSchedule


class SweepConfig(BaseModel):
    """Grid of (n, N/n) cells, each run for ``trials_per_cell`` seeded instances."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(default=128, ge=1)
    dims: list[int] = Field(default_factory=lambda: [10, 15, 20, 25], min_length=1)
    ratios: list[float] = Field(default_factory=lambda: [2, 4, 8, 16, 32, 64], min_length=1)
    trials_per_cell: int = Field(default=100, ge=1)
    T: int = Field(default=500, ge=1)
    noise: NoiseSpec = NoiseSpec()
    schedule: StepSchedule = StepSchedule()
    init: InitSpec = InitSpec()
    master_seed: int = Field(default=0, ge=0, le=2**64 - 1)
    success_kind: Literal["ergodic", "last_iterate"] = "ergodic"
    method: Literal["ste", "projected"] = "ste"
    v_kind: Literal["gaussian", "ones"] = "gaussian"

    @field_validator("dims")
    @classmethod
    def positive_dims(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("dims must be positive")
        return value

    @field_validator("ratios")
    @classmethod
    def positive_ratios(cls, value: list[float]) -> list[float]:
        if any(r <= 0 for r in value):
            raise ValueError("ratios must be positive")
        return value

    def cells(self) -> list[tuple[int, float, int]]:
        """(n, ratio, N) for every grid cell, in report order.

        Ratios that round to an N already in the grid for the same n are
        skipped; the first ratio reaching that N labels the cell.
        """
        seen: set[tuple[int, int]] = set()
        cells = []
        for n in self.dims:
            for r in self.ratios:
                N = sample_count(n, r)
                if (n, N) in seen:
                    continue
                seen.add((n, N))
                cells.append((n, r, N))
        return cells


def sample_count(n: int, ratio: float) -> int:
    return max(1, round(ratio * n))


class CellResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    ratio: float
    N: int
    trials: int = Field(ge=1)
    successes: int = Field(ge=0)
    ergodic_successes: int = Field(ge=0)
    last_iterate_successes: int = Field(ge=0)
    seeds: list[int] = Field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    def rate_for(self, kind: str) -> float:
        count = self.ergodic_successes if kind == "ergodic" else self.last_iterate_successes
        return count / self.trials


class RecoveryReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    cells: list[CellResult] = Field(default_factory=list)
    metadata: dict[str, Any] = Field(default_factory=dict)

    def cell(self, n: int, N: int) -> CellResult:
        for cell in self.cells:
            if cell.n == n and cell.N == N:
                return cell
        raise KeyError(f"no cell for n={n}, N={N}")

    def cells_for(self, n: int) -> list[CellResult]:
        return sorted((c for c in self.cells if c.n == n), key=lambda c: c.N)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "n": [c.n for c in self.cells],
                "N": [c.N for c in self.cells],
                "trials": [c.trials for c in self.cells],
                "successes": [c.successes for c in self.cells],
                "rate": [c.rate for c in self.cells],
            },
            columns=["n", "N", "trials", "successes", "rate"],
        )


class RunSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    T: int
    visits: list[int]
    escapes: list[int]
    visit_count: int
    escape_count: int
    escape_frequency: float | None
    final_hamming: int
    final_loss: float | None
    ergodic_recovered: bool
    last_iterate_recovered: bool


class TrainingResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: NetworkSpec
    record: RunRecord
    summary: RunSummary
    metadata: dict[str, Any] = Field(default_factory=dict)


class ConcentrationRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    N: int
    repeats: int
    median: float
    q10: float
    q90: float
    mean: float
    minimum: float
    maximum: float
    rho_median: float


class ConcentrationTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: list[ConcentrationRow]
    slope: float | None
    metadata: dict[str, Any] = Field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.model_dump() for row in self.rows])
