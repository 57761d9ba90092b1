"""
Settings - CLI Layer

Environment-driven settings for the `bellman` command. A .env file in the
working directory is loaded first (python-dotenv); real environment
variables win over it.

  BELLMAN_THREADS    worker cap for campaigns and simulations (0/unset = os.cpu_count())
  BELLMAN_LOG_LEVEL  level of the JSON logs on stderr (default WARNING)
"""
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

from domain.exceptions import ConfigurationError

DEFAULT_LOG_LEVEL = "WARNING"


@dataclass(frozen=True)
class Settings:
    """
    Attributes:
        threads:   worker count handed to campaigns and Monte Carlo blocks.
        log_level: name of a stdlib logging level.
    """

    threads: int
    log_level: str = DEFAULT_LOG_LEVEL

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ConfigurationError("BELLMAN_THREADS", f"must resolve to >= 1 worker, got {self.threads}")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ConfigurationError("BELLMAN_LOG_LEVEL", f"unknown level {self.log_level!r}")

    @property
    def level(self) -> int:
        return logging.getLevelName(self.log_level)

    @classmethod
    def from_env(cls) -> "Settings":
        raw_threads = os.getenv("BELLMAN_THREADS", "0").strip() or "0"
        try:
            env_threads = int(raw_threads)
        except ValueError:
            raise ConfigurationError("BELLMAN_THREADS", f"not an integer: {raw_threads!r}") from None
        if env_threads < 0:
            raise ConfigurationError("BELLMAN_THREADS", f"must be >= 0, got {env_threads}")
        level = os.getenv("BELLMAN_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper()
        return cls(threads=env_threads or os.cpu_count() or 1, log_level=level)

    def override(self, threads: Optional[int] = None, log_level: Optional[str] = None) -> "Settings":
        """Command-line flags win over the environment."""
        return Settings(
            threads=threads if threads is not None else self.threads,
            log_level=log_level.upper() if log_level else self.log_level,
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Singleton Settings built from .env and the environment.

    Tests that change the environment call get_settings.cache_clear().
    """
    load_dotenv(override=False)
    return Settings.from_env()
