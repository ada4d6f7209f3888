"""Shared pytest fixtures for all tests."""

import pytest

from model.params import ModelParams, init_params
from model.vocab import NUM_SPECIAL_TOKENS
from schemas.corpus_schema import Corpus, CorpusConfig
from schemas.model_config import ModelConfig
from synthdata.generator import generate_corpus
from utils.rng import INIT_STREAM, named_rng


@pytest.fixture
def tiny_model_config() -> ModelConfig:
    """A micro architecture with 4 real tokens."""
    return ModelConfig(
        vocab_size=4 + NUM_SPECIAL_TOKENS,
        d_model=8,
        n_heads=2,
        ff_dim=16,
        n_encoder_layers=1,
        n_decoder_layers=1,
        max_len=16,
        feature_dim=4,
        subsample_factor=2,
    )


@pytest.fixture
def tiny_params(tiny_model_config: ModelConfig) -> ModelParams:
    """Freshly initialised micro model."""
    return init_params(tiny_model_config, named_rng(0, INIT_STREAM))


@pytest.fixture
def tiny_corpus_config() -> CorpusConfig:
    """Corpus settings matching tiny_model_config."""
    return CorpusConfig(
        seed=3,
        vocab_size=4,
        utterance_count=10,
        min_length=2,
        max_length=4,
        min_duration=2,
        max_duration=3,
        feature_dim=4,
        noise_std=0.1,
        dev_fraction=0.2,
        test_fraction=0.2,
    )


@pytest.fixture
def tiny_corpus(tiny_corpus_config: CorpusConfig) -> Corpus:
    """Ten utterances: 6 train, 2 dev, 2 test."""
    return generate_corpus(tiny_corpus_config)
