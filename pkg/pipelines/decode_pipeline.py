"""
Decoding pipeline: one DecodeRecord per utterance of a split, as JSON lines.
"""

import logging
from pathlib import Path

from evaluation.metrics import token_error_rate
from pipelines.common import finish_run, load_inputs, select_split
from schemas.decode_schema import DecodeRecord
from schemas.records_io import write_jsonl
from schemas.run_config import RunConfig
from search.decode import decode_split
from utils.paths import ensure_output_dir, get_checkpoint_path, get_corpus_path, get_decode_path

logger = logging.getLogger(__name__)


async def run_decode(
    config: RunConfig,
    corpus_path: Path,
    checkpoint_path: Path,
    out_dir: Path,
) -> list[DecodeRecord]:
    """
    Decode `config.bench.split` with `config.decode`.

    Args:
        config: Effective run configuration.
        corpus_path: Corpus file or run directory.
        checkpoint_path: Checkpoint file or run directory.
        out_dir: Where decode.jsonl goes.

    Returns:
        The decode records, in split order.
    """
    corpus, params = load_inputs(corpus_path, checkpoint_path)
    utterances = select_split(corpus, config.bench.split, config.bench.limit)
    out_dir = ensure_output_dir(Path(out_dir))

    logger.info(f"Decoding with {config.decode.describe()} on {config.bench.workers} worker(s)")
    records = await decode_split(params, utterances, config.decode, config.bench.workers)

    decode_path = get_decode_path(out_dir)
    write_jsonl(records, decode_path)
    if any(r.reference for r in records):
        logger.info(f"Token error rate: {token_error_rate(records):.2%}")
    empty = sum(r.empty_result for r in records)
    if empty:
        logger.warning(f"{empty} utterances produced no hypothesis")

    finish_run(
        out_dir,
        "decode",
        config,
        inputs=[get_corpus_path(Path(corpus_path)), get_checkpoint_path(Path(checkpoint_path))],
        outputs=[decode_path],
    )
    return records
