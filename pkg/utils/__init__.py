"""
Utilities package for the AMD decoding toolkit.

Provides run-directory paths, deterministic ids, named random streams,
config loading and the run manifest.
"""

from utils.paths import (
    ensure_output_dir,
    get_bench_paths,
    get_checkpoint_path,
    get_corpus_path,
    get_decode_path,
    get_metrics_path,
    get_sweep_path,
    get_train_state_path,
)
from utils.rng import named_rng, restore_rng, rng_state
from utils.uuid_generator import config_hash, generate_corpus_id, generate_utterance_id, validate_uuid

__all__ = [
    # Paths
    "ensure_output_dir",
    "get_bench_paths",
    "get_checkpoint_path",
    "get_corpus_path",
    "get_decode_path",
    "get_metrics_path",
    "get_sweep_path",
    "get_train_state_path",
    # Random streams
    "named_rng",
    "restore_rng",
    "rng_state",
    # Ids
    "config_hash",
    "generate_corpus_id",
    "generate_utterance_id",
    "validate_uuid",
]
