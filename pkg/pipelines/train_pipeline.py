"""
Training pipeline.

Loads the corpus, initialises (or resumes) the model and runs the trainer,
leaving the checkpoint, train state and metrics log in the run directory.
"""

import logging
from pathlib import Path

from model.params import init_params
from pipelines.common import check_vocab, finish_run
from schemas.corpus_io import load_corpus
from schemas.run_config import RunConfig
from training.trainer import TrainResult, train
from utils.paths import (
    ensure_output_dir,
    get_checkpoint_path,
    get_corpus_path,
    get_metrics_path,
    get_train_state_path,
)
from utils.rng import INIT_STREAM, named_rng

logger = logging.getLogger(__name__)


def run_train(config: RunConfig, corpus_path: Path, out_dir: Path, resume: bool = False) -> TrainResult:
    """
    Train a model on the corpus.

    Args:
        config: Effective run configuration.
        corpus_path: Corpus file or the run directory holding it.
        out_dir: Run directory for checkpoint, train state and metrics.
        resume: Continue from the train state in out_dir.

    Returns:
        TrainResult of the trainer.

    Raises:
        FileNotFoundError: If the corpus (or the train state when resuming) is missing.
        ContractViolation: If the model vocabulary does not fit the corpus.
        TrainingDivergedError: If the loss stops being finite.
    """
    corpus_file = get_corpus_path(Path(corpus_path))
    corpus = load_corpus(corpus_file)
    check_vocab(corpus, config.model.vocab_size)
    out_dir = ensure_output_dir(Path(out_dir))

    if not resume:
        metrics_path = get_metrics_path(out_dir)
        if metrics_path.exists():
            logger.warning(f"Overwriting metrics log {metrics_path}")
            metrics_path.unlink()

    params = init_params(config.model, named_rng(config.seed, INIT_STREAM))
    logger.info(
        f"Training on {len(corpus.train)} utterances for {config.train.epochs} epochs "
        f"(gammas {config.train.weights.gamma_ctc}:{config.train.weights.gamma_ar}:{config.train.weights.gamma_amd})"
    )
    result = train(config.train, corpus, params, run_dir=out_dir, resume=resume)

    finish_run(
        out_dir,
        "train",
        config,
        inputs=[corpus_file],
        outputs=[get_checkpoint_path(out_dir), get_train_state_path(out_dir), get_metrics_path(out_dir)],
    )
    return result
