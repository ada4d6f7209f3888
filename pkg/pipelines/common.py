"""
Helpers shared by the command pipelines: loading inputs, picking a split and
finishing a run directory.
"""

import logging
from pathlib import Path
from typing import Iterable

from exceptions import ContractViolation
from model.checkpoint import load_checkpoint
from model.params import ModelParams
from model.vocab import NUM_SPECIAL_TOKENS
from schemas.corpus_io import load_corpus
from schemas.corpus_schema import Corpus, Utterance
from schemas.run_config import RunConfig
from utils.config_loader import write_effective_config
from utils.paths import EFFECTIVE_CONFIG_FILE, get_checkpoint_path, get_corpus_path
from utils.run_manifest import write_manifest

logger = logging.getLogger(__name__)


def check_vocab(corpus: Corpus, model_vocab_size: int) -> None:
    """
    Raises:
        ContractViolation: If the model vocabulary does not cover the corpus
            tokens plus the special ids.
    """
    expected = corpus.config.vocab_size + NUM_SPECIAL_TOKENS
    if model_vocab_size != expected:
        raise ContractViolation(
            f"model vocab_size {model_vocab_size} does not match corpus vocab "
            f"{corpus.config.vocab_size} + {NUM_SPECIAL_TOKENS} special tokens"
        )


def load_inputs(corpus_path: Path, checkpoint_path: Path) -> tuple[Corpus, ModelParams]:
    """
    Load a corpus and a checkpoint and check they fit together.

    Either path may be a run directory or the file itself.

    Raises:
        FileNotFoundError: If a file is missing.
        FormatError: If a file is malformed.
        ContractViolation: If the vocabularies disagree.
    """
    corpus = load_corpus(get_corpus_path(Path(corpus_path)))
    params = load_checkpoint(get_checkpoint_path(Path(checkpoint_path)))
    check_vocab(corpus, params.config.vocab_size)
    return corpus, params


def select_split(corpus: Corpus, split: str, limit: int = 0) -> list[Utterance]:
    """The named split, truncated to `limit` utterances when limit > 0."""
    utterances = list(corpus.split(split))
    if limit > 0:
        utterances = utterances[:limit]
    logger.info(f"Using {len(utterances)} utterances of the {split} split")
    return utterances


def finish_run(
    run_dir: Path,
    command: str,
    config: RunConfig,
    inputs: Iterable[Path],
    outputs: Iterable[Path],
) -> Path:
    """Echo the effective config and write the manifest; returns the manifest path."""
    run_dir = Path(run_dir)
    effective = write_effective_config(config, run_dir / EFFECTIVE_CONFIG_FILE)
    return write_manifest(run_dir, command, config, inputs, [*outputs, effective])
