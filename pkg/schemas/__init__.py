"""
Schemas package for the AMD decoding toolkit.

Contains Pydantic models for:
- Model architecture, corpus, training, decoding and benchmark settings
- The run configuration read by every CLI command
- Codecs for the binary corpus format and JSON-lines record files
"""

from schemas.model_config import ModelConfig
from schemas.corpus_schema import FRAME_SHIFT_SECONDS, SPLIT_NAMES, Corpus, CorpusConfig, Utterance
from schemas.train_schema import EpochMetrics, LossWeights, TrainConfig
from schemas.decode_schema import (
    DecodeMode,
    DecodeRecord,
    DecodeSystem,
    FusionWeights,
    NBestList,
    SchedulePlan,
    ScoredHypothesis,
)
from schemas.bench_schema import (
    BenchConfig,
    BenchReport,
    PairwiseSignificance,
    SweepRow,
    SystemReport,
    default_systems,
)
from schemas.run_config import RunConfig
from schemas.corpus_io import decode_corpus, encode_corpus, load_corpus, save_corpus
from schemas.records_io import append_jsonl, read_jsonl, write_jsonl

__all__ = [
    # Model
    "ModelConfig",
    # Corpus models
    "FRAME_SHIFT_SECONDS",
    "SPLIT_NAMES",
    "Corpus",
    "CorpusConfig",
    "Utterance",
    # Training models
    "EpochMetrics",
    "LossWeights",
    "TrainConfig",
    # Decoding models
    "DecodeMode",
    "DecodeRecord",
    "DecodeSystem",
    "FusionWeights",
    "NBestList",
    "SchedulePlan",
    "ScoredHypothesis",
    # Benchmark models
    "BenchConfig",
    "BenchReport",
    "PairwiseSignificance",
    "SweepRow",
    "SystemReport",
    "default_systems",
    # Run configuration
    "RunConfig",
    # Converters
    "decode_corpus",
    "encode_corpus",
    "load_corpus",
    "save_corpus",
    "append_jsonl",
    "read_jsonl",
    "write_jsonl",
]
