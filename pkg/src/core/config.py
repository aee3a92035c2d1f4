"""Application configuration."""

from functools import lru_cache
from pathlib import Path
import logging

from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field
import yaml

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]


class Settings(BaseSettings):
    """Application settings."""

    # Application
    app_name: str = "Process Model Reconstructor"
    version: str = "1.0.0"

    # Logging
    log_level: str = Field(default="INFO")
    log_format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    # Solver
    brute_force_max_variables: int = Field(default=25, ge=0)

    # Output
    report_indent: int = Field(default=2, ge=0)

    # Config File Path
    main_config_path: str = "config.yaml"

    model_config = SettingsConfigDict(env_prefix="PMR_", env_file=".env", case_sensitive=False)


# Global settings instance
settings = Settings()


def resolve_config_path(config_path: str) -> Path:
    """Resolve a config path against the working directory, then the project root."""
    path = Path(config_path)
    if path.is_absolute() or path.exists():
        return path
    return PROJECT_ROOT / path


def load_main_config(config_path: str | None = None) -> dict:
    """Load the main configuration from config.yaml."""
    path = resolve_config_path(config_path or settings.main_config_path)
    if not path.exists():
        raise FileNotFoundError(f"Main config file not found: {path}")

    logger.debug(f"Loading main config from {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return yaml.safe_load(f) or {}


@lru_cache(maxsize=1)
def get_main_config() -> dict:
    """Main config loaded once per process."""
    return load_main_config()
