"""
Path utilities for the files a run directory holds.

Run directory layout:
    <run_dir>/corpus.amdc            corpus (gen)
    <run_dir>/model.amd1             checkpoint (train)
    <run_dir>/train_state.amd1       resumable optimizer state (train)
    <run_dir>/metrics.jsonl          one line per epoch (train)
    <run_dir>/decode.jsonl           one line per utterance (decode)
    <run_dir>/bench_report.json      BenchReport (bench)
    <run_dir>/bench_report.csv       one row per system (bench)
    <run_dir>/density_sweep.csv      K sweep (analyze)
    <run_dir>/effective_config.json  resolved configuration (every command)
    <run_dir>/manifest.json          inputs, config hash, produced files
"""

from pathlib import Path
from typing import Optional

CORPUS_FILE = "corpus.amdc"
CHECKPOINT_FILE = "model.amd1"
TRAIN_STATE_FILE = "train_state.amd1"
METRICS_FILE = "metrics.jsonl"
DECODE_FILE = "decode.jsonl"
BENCH_JSON_FILE = "bench_report.json"
BENCH_CSV_FILE = "bench_report.csv"
SWEEP_CSV_FILE = "density_sweep.csv"
EFFECTIVE_CONFIG_FILE = "effective_config.json"
MANIFEST_FILE = "manifest.json"


def _require(run_dir: Optional[Path]) -> Path:
    if run_dir is None:
        raise ValueError("Run directory must be provided")
    return Path(run_dir)


def get_corpus_path(run_dir: Optional[Path] = None) -> Path:
    """
    Get the corpus file inside a run directory.

    A path that already names a file is returned unchanged, so --corpus may
    point either at a directory or at the file itself.
    """
    run_dir = _require(run_dir)
    if run_dir.suffix == ".amdc":
        return run_dir
    return run_dir / CORPUS_FILE


def get_checkpoint_path(run_dir: Optional[Path] = None) -> Path:
    """Get the checkpoint file; a path ending in .amd1 is returned unchanged."""
    run_dir = _require(run_dir)
    if run_dir.suffix == ".amd1":
        return run_dir
    return run_dir / CHECKPOINT_FILE


def get_train_state_path(run_dir: Optional[Path] = None) -> Path:
    return _require(run_dir) / TRAIN_STATE_FILE


def get_metrics_path(run_dir: Optional[Path] = None) -> Path:
    return _require(run_dir) / METRICS_FILE


def get_decode_path(run_dir: Optional[Path] = None) -> Path:
    return _require(run_dir) / DECODE_FILE


def get_bench_paths(run_dir: Optional[Path] = None) -> tuple[Path, Path]:
    """(JSON report, CSV table) of a benchmark run."""
    run_dir = _require(run_dir)
    return run_dir / BENCH_JSON_FILE, run_dir / BENCH_CSV_FILE


def get_sweep_path(run_dir: Optional[Path] = None) -> Path:
    return _require(run_dir) / SWEEP_CSV_FILE


def ensure_output_dir(output_dir: Optional[Path] = None) -> Path:
    """
    Ensure the output directory exists, creating it if necessary.

    Args:
        output_dir: Directory path to ensure.

    Returns:
        The output directory path.

    Raises:
        ValueError: If no directory is given.
    """
    output_dir = _require(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir
