import math
from pathlib import Path
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="STE_",
        case_sensitive=False,
        extra="ignore",
        validate_default=True,
    )

    # STE_OUTPUT_DIR: default --out for every CLI subcommand
    output_dir: Path = Field(default=Path("results"))
    logs_path: Path = Field(default=Path("logs"))

    exhaustive_max_n: int = Field(default=16, ge=1, le=20)
    max_cells: int = Field(default=400, ge=1)
    flop_ceiling: float = Field(default=1e13, gt=0)
    workers: int = Field(default=1, ge=1, le=64)

    save_metrics: bool = True


settings = Settings()


# Drift-proxy constant: E[(1{z·w>0} - 1{z·w*>0}) 1{z·w>0} z] = (w - w*) / TAU
TAU = 2.0 * math.sqrt(2.0 * math.pi)
