"""
Deterministic synthetic transcription corpus.

Every real token owns a fixed random prototype vector. An utterance renders its
transcript by repeating each token's prototype for a sampled number of frames
and adding i.i.d. Gaussian noise.
"""

import logging
from typing import Optional

import numpy as np

from model.vocab import FIRST_TOKEN_ID
from schemas.corpus_schema import Corpus, CorpusConfig, Utterance
from utils.rng import CORPUS_STREAM, named_rng
from utils.uuid_generator import generate_corpus_id, generate_utterance_id

logger = logging.getLogger(__name__)


def split_sizes(config: CorpusConfig) -> dict[str, int]:
    """Utterances per split; train takes whatever dev and test leave."""
    n_dev = int(round(config.utterance_count * config.dev_fraction))
    n_test = int(round(config.utterance_count * config.test_fraction))
    n_dev = min(n_dev, config.utterance_count)
    n_test = min(n_test, config.utterance_count - n_dev)
    return {"train": config.utterance_count - n_dev - n_test, "dev": n_dev, "test": n_test}


def token_prototypes(config: CorpusConfig, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """(vocab_size, feature_dim) prototypes; the first draws of the corpus stream."""
    if rng is None:
        rng = named_rng(config.seed, CORPUS_STREAM)
    return rng.normal(0.0, 1.0, size=(config.vocab_size, config.feature_dim))


def generate_corpus(config: CorpusConfig) -> Corpus:
    """
    Generate train/dev/test splits from one seeded stream.

    Args:
        config: Generator settings.

    Returns:
        A Corpus whose transcripts hold model token ids (FIRST_TOKEN_ID and up).
        Two calls with the same config return bit-identical corpora.
    """
    rng = named_rng(config.seed, CORPUS_STREAM)
    prototypes = token_prototypes(config, rng)
    corpus_id = generate_corpus_id(config.seed)
    sizes = split_sizes(config)

    splits: dict[str, list[Utterance]] = {"train": [], "dev": [], "test": []}
    index = 0
    for split, count in sizes.items():
        for _ in range(count):
            length = int(rng.integers(config.min_length, config.max_length + 1))
            tokens = rng.integers(0, config.vocab_size, size=length)
            durations = rng.integers(config.min_duration, config.max_duration + 1, size=length)
            clean = np.repeat(prototypes[tokens], durations, axis=0)
            noise = rng.standard_normal(clean.shape)
            splits[split].append(
                Utterance(
                    id=generate_utterance_id(corpus_id, split, index),
                    transcript=[int(t) + FIRST_TOKEN_ID for t in tokens],
                    features=clean + config.noise_std * noise,
                )
            )
            index += 1

    corpus = Corpus(config=config, **splits)
    total_seconds = sum(u.duration_seconds for u in corpus.utterances())
    logger.info(f"Generated corpus {corpus_id}: {sizes}, {total_seconds:.1f}s of audio")
    return corpus
