"""Application configuration management."""

import logging
import logging.config
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET")


class Settings(BaseSettings):
    """Numerical defaults and runtime options with environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="NOSIGNAL_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    env: str = "development"
    log_level: str = "WARNING"

    # Linear algebra
    hermitian_tol: float = 1e-10
    jacobi_max_sweeps: int = 100

    # States and decompositions
    state_tol: float = 1e-10
    prior_tol: float = 1e-12
    average_tol: float = 1e-10

    # Measurements
    povm_tol: float = 1e-9
    certificate_tol: float = 1e-8

    # Oracle defaults (CLI flags override these)
    oracle_max_iters: int = 10000
    oracle_tol: float = 1e-8
    oracle_restarts: int = 5
    oracle_workers: int = 4
    seed: int = 0

    @field_validator("log_level", mode="before")
    @classmethod
    def parse_log_level(cls, v):
        """Normalize level names ("info" -> "INFO")."""
        if isinstance(v, str):
            level = v.strip().upper()
            if level not in LOG_LEVELS:
                raise ValueError(f"Unknown log level: {v}")
            return level
        return v

    @field_validator("oracle_workers", "oracle_restarts", "jacobi_max_sweeps")
    @classmethod
    def positive_count(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v


# Global settings instance
settings = Settings()


def is_production() -> bool:
    """Check if running in production environment."""
    return settings.env.lower() == "production"


def get_log_config(level: Optional[str] = None) -> dict:
    """Get logging configuration."""
    level = (level or settings.log_level).upper()
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
            },
            "detailed": {
                "format": "%(asctime)s [%(levelname)s] %(name)s:%(lineno)d: %(message)s"
            },
        },
        "handlers": {
            "console": {
                "level": level,
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
                "formatter": "standard" if is_production() else "detailed",
            },
        },
        "root": {
            "level": level,
            "handlers": ["console"],
        },
    }


def configure_logging(level: Optional[str] = None) -> None:
    """Apply the dictConfig returned by get_log_config."""
    logging.config.dictConfig(get_log_config(level))
