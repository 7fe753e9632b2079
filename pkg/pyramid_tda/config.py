"""Runtime settings read from the environment and an optional ``.env`` file."""
from __future__ import annotations

from functools import lru_cache

import dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="TDA_", extra="ignore")

    # joblib worker cap for projections and per-degree loops
    threads: int = Field(default=1, ge=1)
    pyramid_cap: int = Field(default=6, ge=1)
    log_level: str = "WARNING"
    server_name: str = "BarcodeServer"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Load settings once per process.

    :return: the cached Settings instance; call ``get_settings.cache_clear()`` to reload
    """
    dotenv.load_dotenv()
    return Settings()
