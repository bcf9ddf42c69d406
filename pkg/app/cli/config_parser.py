"""Flat ``key = value`` experiment configuration.

Example file::

    # noiseless phase-transition sweep
    m = 128
    dims = 10,15,20,25
    ratios = 2,4,8,16,32,64
    T = 500
    master_seed = 7

Precedence is defaults < file < overrides. Unknown keys are errors.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator, model_validator

from app.diagnostics.concentration import Probe
from app.exceptions import ConfigParseError
from app.harness.models import SweepConfig
from app.model.models import NoiseSpec
from app.optim.models import InitSpec, StepSchedule


class ExperimentConfig(BaseModel):
    """Every key a config file may set, with its default."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # single-instance runs
    m: int = Field(default=128, ge=1)
    n: int = Field(default=25, ge=1)
    N: int = Field(default=140, ge=1)

    # sweep grid
    dims: list[int] = Field(default_factory=lambda: [10, 15, 20, 25], min_length=1)
    ratios: list[float] = Field(default_factory=lambda: [2.0, 4.0, 8.0, 16.0, 32.0, 64.0], min_length=1)
    trials_per_cell: int = Field(default=100, ge=1)
    T: int = Field(default=500, ge=1)

    noise_kind: Literal["none", "gaussian"] = "none"
    sigma: float = Field(default=0.0, ge=0.0)
    schedule_kind: Literal["constant", "power_decay"] = "constant"
    eta0: float = Field(default=1.0, gt=0.0)
    p: float = Field(default=0.5, gt=0.0, le=1.0)
    init_kind: Literal["zero", "bounded_uniform"] = "zero"
    c0: float = Field(default=1.0, ge=0.0)
    method: Literal["ste", "projected"] = "ste"
    master_seed: int = Field(default=0, ge=0, le=2**64 - 1)
    success_kind: Literal["ergodic", "last_iterate"] = "ergodic"
    v_kind: Literal["gaussian", "ones"] = "gaussian"

    # concentration campaign
    N_list: list[int] = Field(default_factory=lambda: [512, 1024, 2048, 4096, 8192], min_length=1)
    repeats: int = Field(default=10, ge=1)
    probe: Literal["exhaustive", "sampled"] = "exhaustive"
    probe_k: int = Field(default=256, ge=1)

    # Monte-Carlo checks
    samples: int = Field(default=1_000_000, ge=1)
    trials: int = Field(default=2000, ge=1)

    @model_validator(mode="before")
    @classmethod
    def noise_kind_from_sigma(cls, data):
        """Unset noise_kind follows sigma: gaussian when sigma > 0."""
        if isinstance(data, dict) and "noise_kind" not in data and "sigma" in data:
            try:
                sigma = float(data["sigma"])
            except (TypeError, ValueError):
                return data
            if sigma > 0:
                data = {**data, "noise_kind": "gaussian"}
        return data

    @field_validator("sigma")
    @classmethod
    def sigma_needs_noise(cls, value: float, info: ValidationInfo) -> float:
        if value > 0 and info.data.get("noise_kind") == "none":
            raise ValueError("sigma > 0 requires noise_kind = gaussian")
        return value

    @field_validator("dims", "ratios", "N_list", mode="before")
    @classmethod
    def split_list(cls, value):
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @field_validator("dims", "N_list")
    @classmethod
    def positive_ints(cls, value: list[int]) -> list[int]:
        if any(item < 1 for item in value):
            raise ValueError("entries must be positive")
        return value

    @field_validator("ratios")
    @classmethod
    def positive_ratios(cls, value: list[float]) -> list[float]:
        if any(item <= 0 for item in value):
            raise ValueError("entries must be positive")
        return value

    def defaulted_keys(self) -> list[str]:
        """Keys that were not set by the file or an override."""
        return [key for key in type(self).model_fields if key not in self.model_fields_set]

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(kind=self.noise_kind, sigma=self.sigma)

    def schedule(self) -> StepSchedule:
        return StepSchedule(kind=self.schedule_kind, eta0=self.eta0, p=self.p)

    def init_spec(self) -> InitSpec:
        return InitSpec(kind=self.init_kind, c0=self.c0)

    def probe_spec(self) -> Probe:
        return Probe(kind=self.probe, k=self.probe_k, seed=self.master_seed)

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(
            m=self.m,
            dims=self.dims,
            ratios=self.ratios,
            trials_per_cell=self.trials_per_cell,
            T=self.T,
            noise=self.noise_spec(),
            schedule=self.schedule(),
            init=self.init_spec(),
            master_seed=self.master_seed,
            success_kind=self.success_kind,
            method=self.method,
            v_kind=self.v_kind,
        )


CONFIG_KEYS = tuple(ExperimentConfig.model_fields)


def _split_line(raw: str, line_number: int) -> tuple[str, str] | None:
    text = raw.split("#", 1)[0].strip()
    if not text:
        return None
    if "=" not in text:
        raise ConfigParseError("expected 'key = value'", line=line_number)
    key, value = (part.strip() for part in text.split("=", 1))
    if not key:
        raise ConfigParseError("missing key before '='", line=line_number)
    return key, value


def parse_config(
    text: str = "",
    overrides: dict[str, str] | None = None,
    base: dict[str, object] | None = None,
) -> ExperimentConfig:
    """Parse and validate a flat config file, then apply overrides.

    Args:
        text: File contents; blank lines and ``#`` comments are ignored
        overrides: key -> value strings from the command line; these win
        base: Command-specific defaults, applied below the file

    Returns:
        Fully defaulted, validated ExperimentConfig

    Raises:
        ConfigParseError: Unknown or repeated key, malformed line, type
            mismatch or constraint violation; names the key and line
    """
    values: dict[str, object] = {}
    lines: dict[str, int | None] = {}

    for line_number, raw in enumerate(text.splitlines(), start=1):
        pair = _split_line(raw, line_number)
        if pair is None:
            continue
        key, value = pair
        if key not in CONFIG_KEYS:
            raise ConfigParseError("unknown key", key=key, line=line_number)
        if key in values:
            raise ConfigParseError(f"repeated key (first set on line {lines[key]})", key=key, line=line_number)
        values[key] = value
        lines[key] = line_number

    for key, value in (overrides or {}).items():
        if key not in CONFIG_KEYS:
            raise ConfigParseError("unknown key", key=key)
        values[key] = value
        lines[key] = None

    for key, value in (base or {}).items():
        if key not in CONFIG_KEYS:
            raise ConfigParseError("unknown key", key=key)
        values.setdefault(key, value)
        lines.setdefault(key, None)

    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else None
        raise ConfigParseError(error["msg"], key=key, line=lines.get(key)) from e


def _render_value(value) -> str:
    if isinstance(value, list):
        return ",".join(_render_value(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(config: ExperimentConfig) -> str:
    """Echo every resolved key, one per line; parse_config reads it back unchanged."""
    rows = [f"{key} = {_render_value(getattr(config, key))}" for key in CONFIG_KEYS]
    return "\n".join(rows) + "\n"
