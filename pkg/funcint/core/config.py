# ================================================================================================
# ⚙️ CONFIGURATION MANAGEMENT - Variables de Entorno y Configuración
# ================================================================================================
# Runtime settings for the library and the CLI (12-Factor: everything from the environment)

import os
from functools import lru_cache
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    ✅ Configuración centralizada de funcint.

    Values come from ``FUNCINT_*`` environment variables or a ``.env`` file.
    Job-level parameters (models, meshes, chains) live in the JSON run
    configuration instead, see ``funcint.cli.config_schema``.
    """

    model_config = SettingsConfigDict(
        env_prefix="FUNCINT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ================================================================================================
    # 📊 CONFIGURACIÓN DE LOGGING
    # ================================================================================================

    LOG_LEVEL: str = Field(default="INFO", description="Logging level")
    LOG_FORMAT: str = Field(default="console", description="Log format: json or console")

    # ================================================================================================
    # ⚡ CONFIGURACIÓN DE EJECUCIÓN
    # ================================================================================================

    MAX_WORKERS: int = Field(
        default=0,
        ge=0,
        description="Threads used for sweep rows (0 = number of CPUs)"
    )
    DEFAULT_SEED: int = Field(
        default=20240601,
        ge=0,
        lt=2**64,
        description="Seed used by MCMC jobs that do not set one"
    )

    # ================================================================================================
    # 🔢 CONFIGURACIÓN NUMÉRICA Y DE SALIDA
    # ================================================================================================

    CSV_SIGNIFICANT_DIGITS: int = Field(
        default=17,
        ge=1,
        le=17,
        description="Significant digits written to CSV output"
    )
    POINT_TOLERANCE: float = Field(
        default=1e-10,
        gt=0,
        description="Slack when locating points inside elements"
    )

    # ================================================================================================
    # 🔧 VALIDATORS
    # ================================================================================================

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validar nivel de logging."""
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed:
            raise ValueError(f"LOG_LEVEL must be one of {allowed}")
        return v.upper()

    @field_validator("LOG_FORMAT")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validar formato de logging."""
        allowed = ["json", "console"]
        if v.lower() not in allowed:
            raise ValueError(f"LOG_FORMAT must be one of {allowed}")
        return v.lower()

    # ================================================================================================
    # 🛠️ COMPUTED PROPERTIES
    # ================================================================================================

    @property
    def worker_count(self) -> int:
        """Effective pool size for sweeps."""
        if self.MAX_WORKERS > 0:
            return self.MAX_WORKERS
        return os.cpu_count() or 1

    @property
    def csv_float_format(self) -> str:
        return f"{{:.{self.CSV_SIGNIFICANT_DIGITS}g}}"


@lru_cache()
def get_settings() -> Settings:
    """
    🏭 Factory cacheada de Settings.

    Tests clear the cache with ``get_settings.cache_clear()`` after patching
    the environment.
    """
    return Settings()


def reload_settings(overrides: Optional[dict] = None) -> Settings:
    """Drop the cached settings and build a fresh instance."""
    get_settings.cache_clear()
    if overrides:
        return Settings(**overrides)
    return get_settings()
