"""
Pydantic schemas for the synthetic transcription corpus.

Defines the generator configuration, single utterances (feature frames plus
transcript) and the train/dev/test corpus container.
"""

from typing import Iterator, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

# Frame shift used for all duration accounting (RTF).
FRAME_SHIFT_SECONDS = 0.01

SplitName = Literal["train", "dev", "test"]
SPLIT_NAMES: tuple[SplitName, ...] = ("train", "dev", "test")


class CorpusConfig(BaseModel):
    """
    Settings of the synthetic corpus generator.

    Attributes:
        seed: Seed of the "corpus" random stream.
        vocab_size: Number of real tokens (special ids excluded).
        utterance_count: Total utterances over all splits.
        min_length: Shortest transcript.
        max_length: Longest transcript.
        min_duration: Fewest frames a token occupies.
        max_duration: Most frames a token occupies.
        feature_dim: Width of a feature frame.
        noise_std: Standard deviation of the additive Gaussian noise.
        dev_fraction: Share of utterances in the dev split.
        test_fraction: Share of utterances in the test split.
    """

    seed: int = Field(default=0, ge=0)
    vocab_size: int = Field(default=26, ge=1)
    utterance_count: int = Field(default=2000, ge=0)
    min_length: int = Field(default=5, ge=1)
    max_length: int = Field(default=30, ge=1)
    min_duration: int = Field(default=2, ge=1)
    max_duration: int = Field(default=4, ge=1)
    feature_dim: int = Field(default=16, ge=1)
    noise_std: float = Field(default=0.3, ge=0.0)
    dev_fraction: float = Field(default=0.1, ge=0.0, le=1.0)
    test_fraction: float = Field(default=0.1, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_ranges(self) -> "CorpusConfig":
        if self.min_length > self.max_length:
            raise ValueError(
                f"length range is empty: min_length={self.min_length} > max_length={self.max_length}"
            )
        if self.min_duration > self.max_duration:
            raise ValueError(
                f"duration range is empty: min_duration={self.min_duration} > max_duration={self.max_duration}"
            )
        if self.dev_fraction + self.test_fraction > 1.0:
            raise ValueError("dev_fraction + test_fraction must not exceed 1")
        return self


class Utterance(BaseModel):
    """
    One synthetic utterance.

    Attributes:
        id: Deterministic UUID string.
        transcript: Model token ids (real tokens only, no sos/eos).
        features: (T, feature_dim) float64 frames.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    id: str
    transcript: list[int]
    features: np.ndarray

    @property
    def frame_count(self) -> int:
        return int(self.features.shape[0])

    @property
    def duration_seconds(self) -> float:
        return self.frame_count * FRAME_SHIFT_SECONDS


class Corpus(BaseModel):
    """
    A generated corpus with disjoint train/dev/test splits.

    Attributes:
        config: The generator settings that produced it.
        train: Training utterances.
        dev: Development utterances.
        test: Test utterances.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: CorpusConfig
    train: list[Utterance] = Field(default_factory=list)
    dev: list[Utterance] = Field(default_factory=list)
    test: list[Utterance] = Field(default_factory=list)

    def split(self, name: SplitName) -> list[Utterance]:
        if name not in SPLIT_NAMES:
            raise ValueError(f"Unknown split {name!r}; expected one of {SPLIT_NAMES}")
        return getattr(self, name)

    def split_sizes(self) -> dict[str, int]:
        return {name: len(self.split(name)) for name in SPLIT_NAMES}

    def utterances(self) -> Iterator[Utterance]:
        """All utterances, train then dev then test."""
        for name in SPLIT_NAMES:
            yield from self.split(name)

    def total(self) -> int:
        return sum(self.split_sizes().values())
