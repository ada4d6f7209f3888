"""
Run manifest: what a command read, under which configuration, and what it wrote.
"""

import json
import logging
from pathlib import Path
from typing import Iterable

from schemas.run_config import RunConfig
from utils.paths import MANIFEST_FILE
from utils.uuid_generator import config_hash

logger = logging.getLogger(__name__)


def _relative(path: Path, run_dir: Path) -> str:
    return str(path.relative_to(run_dir)) if path.is_relative_to(run_dir) else str(path)


def write_manifest(
    run_dir: Path,
    command: str,
    config: RunConfig,
    inputs: Iterable[Path],
    outputs: Iterable[Path],
) -> Path:
    """
    Write <run_dir>/manifest.json.

    Args:
        run_dir: Output directory of the command.
        command: Subcommand name.
        config: Effective configuration.
        inputs: Files the command read.
        outputs: Files the command produced.

    Returns:
        Path of the manifest.
    """
    run_dir = Path(run_dir)
    manifest = {
        "command": command,
        "seed": config.seed,
        "config_hash": config_hash(config.effective()),
        "inputs": sorted(str(p) for p in inputs),
        "outputs": sorted(_relative(Path(p), run_dir) for p in outputs),
    }
    path = run_dir / MANIFEST_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Manifest written to {path} ({len(manifest['outputs'])} outputs)")
    return path
