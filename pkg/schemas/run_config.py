"""
Run configuration shared by every CLI command.

A run is fully specified by a dotenv-style config file with flat key paths
(AMD_TRAIN__EPOCHS=30, AMD_DECODE__SCHEDULE=mixed:10-2) plus the seed.
Command-line flags arrive as init arguments and are deep-merged over the
file values, so they win.
"""

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from schemas.bench_schema import BenchConfig
from schemas.corpus_schema import CorpusConfig
from schemas.decode_schema import DecodeSystem
from schemas.model_config import ModelConfig
from schemas.train_schema import TrainConfig


class RunConfig(BaseSettings):
    """
    Every parameter a command may read.

    Attributes:
        seed: Root seed; corpus, init, block-sampling and shuffle streams derive from it.
            It overwrites the corpus and train section seeds.
        corpus: Synthetic corpus settings.
        model: Architecture.
        train: Optimisation settings.
        decode: Decoding system used by the decode command.
        bench: Benchmark and sweep settings.
    """

    model_config = SettingsConfigDict(
        env_prefix="AMD_",
        env_nested_delimiter="__",
        env_file=None,
        extra="ignore",
    )

    seed: int = Field(default=0, ge=0)
    corpus: CorpusConfig = Field(default_factory=CorpusConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    decode: DecodeSystem = Field(default_factory=DecodeSystem)
    bench: BenchConfig = Field(default_factory=BenchConfig)

    @model_validator(mode="after")
    def _propagate_seed(self) -> "RunConfig":
        # The root seed is authoritative for every stream.
        self.corpus = self.corpus.model_copy(update={"seed": self.seed})
        self.train = self.train.model_copy(update={"seed": self.seed})
        return self

    def effective(self) -> dict:
        """The resolved configuration as plain JSON-compatible data."""
        return self.model_dump(mode="json")
