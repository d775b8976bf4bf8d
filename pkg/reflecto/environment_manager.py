import os
import logging
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

DEFAULT_DIM_CAP = 12
DEFAULT_SAMPLES = 20
DEFAULT_SEED = 0


class ReflectoSettings(BaseSettings):
    """
    Typed runtime configuration, read from REFLECTO_* environment variables

    Every value here is only a default: library functions take the same
    quantities as explicit keyword arguments.
    """

    model_config = SettingsConfigDict(env_prefix="REFLECTO_", extra="ignore")

    dim_cap: int = Field(default=DEFAULT_DIM_CAP, ge=1, le=20)
    samples: int = Field(default=DEFAULT_SAMPLES, ge=0)
    seed: int = DEFAULT_SEED
    epsilon: str = "1/2"
    aux_bounded: bool = True
    log_level: str = "WARNING"

    @field_validator("epsilon")
    @classmethod
    def _check_epsilon(cls, value: str) -> str:
        eps = Fraction(value)
        if not 0 < eps <= 1:
            raise ValueError(f"epsilon must lie in (0,1], got {value}")
        return value

    @field_validator("log_level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value}")
        return level

    @property
    def epsilon_value(self) -> Fraction:
        return Fraction(self.epsilon)


class EnvironmentManager:
    """
    Loads an optional .env file and builds the settings object from the
    resulting process environment.
    """

    def __init__(self, env_path: Optional[Path] = None):
        """
        Initialize Environment Manager

        Args:
            env_path: .env file to load; defaults to REFLECTO_ENV_FILE or ./.env
        """
        if env_path is None:
            env_path = Path(os.getenv("REFLECTO_ENV_FILE", Path.cwd() / ".env"))
        self.env_path = Path(env_path)

        # Real environment variables win over the file
        if self.env_path.exists():
            load_dotenv(dotenv_path=self.env_path, override=False)
            logger.debug(f"Loaded environment file {self.env_path}")

        self.settings = ReflectoSettings()

    def reload(self) -> ReflectoSettings:
        """
        Re-read the .env file and the environment

        Returns:
            ReflectoSettings: the fresh settings
        """
        if self.env_path.exists():
            load_dotenv(dotenv_path=self.env_path, override=False)
        self.settings = ReflectoSettings()
        logger.info("Settings reloaded")
        return self.settings

    def get_environment_info(self) -> Dict[str, Any]:
        """
        Describe where the configuration came from

        Returns:
            Dict[str, Any]: env file status and every effective setting
        """
        overridden = sorted(
            name for name in ReflectoSettings.model_fields
            if f"REFLECTO_{name.upper()}" in os.environ
        )
        return {
            "env_file": {
                "path": str(self.env_path),
                "exists": self.env_path.exists(),
            },
            "settings": self.settings.model_dump(),
            "from_environment": overridden,
        }


@lru_cache(maxsize=1)
def get_env_manager() -> EnvironmentManager:
    """Get the process-wide EnvironmentManager instance"""
    return EnvironmentManager()


def get_settings() -> ReflectoSettings:
    return get_env_manager().settings


def reload_settings() -> ReflectoSettings:
    """Drop the cached manager and read the configuration again"""
    get_env_manager.cache_clear()
    return get_settings()
