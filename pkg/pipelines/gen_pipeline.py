"""
Corpus generation pipeline.
"""

import logging
from pathlib import Path

from pipelines.common import finish_run
from schemas.corpus_io import save_corpus
from schemas.corpus_schema import Corpus
from schemas.run_config import RunConfig
from synthdata.generator import generate_corpus
from utils.paths import ensure_output_dir, get_corpus_path

logger = logging.getLogger(__name__)


def run_gen(config: RunConfig, out_dir: Path) -> Corpus:
    """
    Generate the synthetic corpus and save it into out_dir.

    The corpus config is validated when the RunConfig is built, so an invalid
    range fails before anything is written.

    Args:
        config: Effective run configuration.
        out_dir: Run directory; created if missing.

    Returns:
        The generated corpus.
    """
    out_dir = ensure_output_dir(Path(out_dir))
    corpus = generate_corpus(config.corpus)
    corpus_path = get_corpus_path(out_dir)
    save_corpus(corpus, corpus_path)

    sizes = corpus.split_sizes()
    logger.info(f"Generated corpus: {sizes['train']} train, {sizes['dev']} dev, {sizes['test']} test")
    finish_run(out_dir, "gen", config, inputs=[], outputs=[corpus_path])
    return corpus
