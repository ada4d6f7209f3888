"""
Centralized configuration for the AMD decoding toolkit.

Application settings (log level, log file, default run directory) come from
AMD_-prefixed environment variables or a .env file. Run settings (corpus,
model, training, decoding) live in schemas.run_config.RunConfig instead.
"""

import logging
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = Field(default="INFO", alias="AMD_LOG_LEVEL")
    log_file: str = Field(default="amd.log", alias="AMD_LOG_FILE")

    # Parent of <command>/ when a command runs without --out
    runs_dir: Path = Field(default=Path("runs"), alias="AMD_RUNS_DIR")


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()


class ColoredFormatter(logging.Formatter):
    """Console formatter that colours each record by level."""

    COLORS = {
        logging.DEBUG: "\033[36m",
        logging.INFO: "\033[32m",
        logging.WARNING: "\033[33m",
        logging.ERROR: "\033[31m",
        logging.CRITICAL: "\033[1;31m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        color = self.COLORS.get(record.levelno, self.RESET)
        return f"{color}{super().format(record)}{self.RESET}"


def setup_logging(level: int | str = logging.INFO, log_file: str | None = None) -> None:
    """
    Attach a file handler and a coloured console handler to the root logger.

    Calling it again is a no-op once the root logger has handlers.

    Args:
        level: Logging level or its name, e.g. "DEBUG".
        log_file: Log file path; defaults to the AMD_LOG_FILE setting. Its
            parent directory is created if missing.
    """
    root_logger = logging.getLogger()
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    root_logger.setLevel(level)
    if root_logger.handlers:
        return

    path = Path(log_file or settings.log_file)
    path.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(path, encoding="utf-8")
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(ColoredFormatter(LOG_FORMAT))

    for handler in (file_handler, console_handler):
        handler.setLevel(level)
        root_logger.addHandler(handler)

    # Event-loop debug messages
    logging.getLogger("asyncio").setLevel(logging.WARNING)
