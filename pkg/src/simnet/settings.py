from __future__ import annotations

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Largest dense table (in cells) any operation may materialize
    cell_budget: int = Field(default=2**24, alias="SIMNET_CELL_BUDGET", gt=0)

    eps_norm: float = Field(default=1e-9, alias="SIMNET_EPS_NORM", gt=0)
    eps_zero: float = Field(default=1e-12, alias="SIMNET_EPS_ZERO", gt=0)
    eps_ci: float = Field(default=1e-9, alias="SIMNET_EPS_CI", gt=0)
    eps_consist: float = Field(default=1e-6, alias="SIMNET_EPS_CONSIST", gt=0)

    seed: int = Field(default=0, alias="SIMNET_SEED")
    log_level: str = Field(default="INFO", alias="SIMNET_LOG_LEVEL")


@lru_cache
def get_settings() -> Settings:
    return Settings()
