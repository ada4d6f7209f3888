"""
Run-configuration loading for CLI commands.

Reads a dotenv-format config file and merges command-line overrides on top.
"""

import json
import logging
from pathlib import Path
from typing import Any, Optional

from dotenv import dotenv_values

from schemas.run_config import RunConfig

logger = logging.getLogger(__name__)


def load_run_config(file_path: Optional[str] = None, overrides: Optional[dict[str, Any]] = None) -> RunConfig:
    """
    Build the effective run configuration.

    Args:
        file_path: Optional dotenv file with AMD_-prefixed flat keys.
        overrides: Nested values from command-line flags; they win over the file.

    Returns:
        The validated RunConfig.

    Raises:
        FileNotFoundError: If the config file doesn't exist.
        ValueError: If the file holds no AMD_ keys.
        pydantic.ValidationError: If a value is invalid.
    """
    overrides = overrides or {}
    if file_path is None:
        config = RunConfig(**overrides)
        logger.info("Using default run configuration with command-line overrides")
        return config

    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {file_path}")

    keys = [k for k in dotenv_values(path) if k.upper().startswith("AMD_")]
    if not keys:
        raise ValueError(f"Config file has no AMD_ settings: {file_path}")

    config = RunConfig(_env_file=str(path), **overrides)
    logger.info(f"Loaded run config from {file_path} ({len(keys)} keys)")
    return config


def write_effective_config(config: RunConfig, path: Path) -> Path:
    """Echo the resolved configuration as sorted, indented JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(config.effective(), f, indent=2, sort_keys=True)
        f.write("\n")
    return path
