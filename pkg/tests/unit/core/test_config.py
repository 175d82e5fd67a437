# ================================================================================================
# 🧪 SETTINGS + LOGGING TESTS
# ================================================================================================

import pytest
import structlog
from pydantic import ValidationError

from funcint.core.config import Settings, get_settings, reload_settings
from funcint.core.logging import configure_logging


@pytest.mark.unit
class TestSettings:
    """⚙️ Variables de entorno FUNCINT_*."""

    def test_defaults(self):
        settings = get_settings()

        assert settings.LOG_LEVEL == "INFO"
        assert settings.CSV_SIGNIFICANT_DIGITS == 17
        assert settings.csv_float_format == "{:.17g}"
        assert settings.DEFAULT_SEED == 20240601

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("FUNCINT_MAX_WORKERS", "3")
        monkeypatch.setenv("FUNCINT_LOG_LEVEL", "debug")
        get_settings.cache_clear()

        settings = get_settings()

        assert settings.worker_count == 3
        assert settings.LOG_LEVEL == "DEBUG"

    def test_zero_workers_means_cpu_count(self, mocker):
        mocker.patch("funcint.core.config.os.cpu_count", return_value=6)

        assert Settings(MAX_WORKERS=0).worker_count == 6

    def test_settings_are_cached(self):
        assert get_settings() is get_settings()

    def test_reload_with_overrides(self):
        settings = reload_settings({"CSV_SIGNIFICANT_DIGITS": 6})

        assert settings.csv_float_format == "{:.6g}"

    @pytest.mark.parametrize("field,value", [("LOG_LEVEL", "LOUD"), ("LOG_FORMAT", "xml"), ("CSV_SIGNIFICANT_DIGITS", 0)])
    def test_invalid_values_are_rejected(self, field, value):
        with pytest.raises(ValidationError):
            Settings(**{field: value})


@pytest.mark.unit
class TestLogging:

    @pytest.mark.parametrize("fmt", ["json", "console"])
    def test_configure_logging_returns_usable_logger(self, fmt):
        configure_logging(Settings(LOG_FORMAT=fmt, LOG_LEVEL="WARNING"), force=True)

        structlog.get_logger("funcint.test").info("ignored_below_level")
        structlog.get_logger("funcint.test").warning("visible", value=1)
