import logging
from functools import lru_cache
from typing import Literal

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import DomainError

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Runtime defaults, read from VIR25_* environment variables or a local .env file.
    """
    series_order: int = 24
    log_level: str = "WARNING"
    output_format: Literal["json", "text", "latex"] = "json"

    model_config = SettingsConfigDict(env_prefix="VIR25_", env_file=".env", extra="ignore")

    @field_validator("series_order")
    @classmethod
    def order_must_be_non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"series order must be non-negative, got {value}")
        return value

    @field_validator("log_level")
    @classmethod
    def level_must_exist(cls, value: str) -> str:
        level = value.upper()
        if level not in ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"):
            raise ValueError(f"unknown log level {value!r}")
        return level


@lru_cache()
def get_settings() -> Settings:
    settings = Settings()
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings


def default_order(order=None) -> int:
    """Resolve an optional per-call truncation order against the configured default."""
    if order is None:
        return get_settings().series_order
    if order < 0:
        raise DomainError(f"truncation order must be non-negative, got {order}")
    return order
