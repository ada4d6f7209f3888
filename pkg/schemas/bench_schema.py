"""
Pydantic schemas for benchmarking and the lattice-density sweep.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from schemas.decode_schema import DecodeSystem, FusionWeights


def default_systems() -> list[DecodeSystem]:
    """CTC+AR greedy baseline and the tripartite greedy systems it is compared with."""
    return [
        DecodeSystem(name="ctc_ar_greedy", mode="greedy-ar", weights=FusionWeights.baseline()),
        DecodeSystem(name="amd_fixed_8", mode="amd", schedule="fixed:8", k_amd=1, k_main=1),
        DecodeSystem(name="amd_mixed_10_2", mode="amd", schedule="mixed:10-2", k_amd=1, k_main=1),
        DecodeSystem(name="amd_mixed_30_8", mode="amd", schedule="mixed:30-8", k_amd=1, k_main=1),
    ]


class BenchConfig(BaseModel):
    """
    Benchmark and sweep settings.

    Attributes:
        systems: Decoding systems to run.
        baseline: Name of the system speed-ups and significance tests refer to.
        split: Corpus split to decode.
        repetitions: Timed runs per system; the median is reported.
        alpha: Significance level of the MAPSSWE test.
        workers: Utterance-level parallelism, recorded in the report.
        limit: Decode at most this many utterances (0 means all).
        sweep_k_max: Largest beam size of the density sweep.
        sweep_block_sizes: Fixed block sizes swept for the AMD systems.
    """

    systems: list[DecodeSystem] = Field(default_factory=default_systems)
    baseline: str = "ctc_ar_greedy"
    split: Literal["train", "dev", "test"] = "test"
    repetitions: int = Field(default=3, ge=1)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    workers: int = Field(default=1, ge=1)
    limit: int = Field(default=0, ge=0)
    sweep_k_max: int = Field(default=20, ge=1)
    sweep_block_sizes: list[int] = Field(default_factory=lambda: [1, 2, 4, 8])

    @model_validator(mode="after")
    def _baseline_present(self) -> "BenchConfig":
        names = [s.name for s in self.systems]
        if len(set(names)) != len(names):
            raise ValueError(f"system names must be unique, got {names}")
        if self.baseline not in names:
            raise ValueError(f"baseline {self.baseline!r} is not one of the systems {names}")
        return self


class SystemReport(BaseModel):
    """
    Aggregate results of one system.

    Attributes:
        name: System name.
        description: Human-readable configuration.
        wer: 1-best error rate over the split.
        errors: Total edit errors.
        reference_tokens: Total reference tokens.
        oracle_wer: Error rate of the best N-best entry per utterance.
        lattice_density: Mean distinct aligned predictions per reference token.
        decode_seconds: Median total decode time over repetitions.
        audio_seconds: Total duration of the split.
        rtf: decode_seconds / audio_seconds.
        speedup: Baseline decode time divided by this system's.
        amd_calls: AMD decoder invocations over the split.
        ar_calls: AR decoder invocations over the split.
        segment_errors: Per-utterance error counts, in split order.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    name: str
    description: str
    wer: float
    errors: int
    reference_tokens: int
    oracle_wer: float
    lattice_density: float
    decode_seconds: float
    audio_seconds: float
    rtf: float
    speedup: float = 1.0
    amd_calls: int = 0
    ar_calls: int = 0
    segment_errors: list[int] = Field(default_factory=list)


class PairwiseSignificance(BaseModel):
    """
    MAPSSWE comparison of one system against the baseline.

    A positive z means the system makes more errors than the baseline.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    system: str
    baseline: str
    z: float
    significant: bool
    alpha: float


class BenchReport(BaseModel):
    """
    Output of a benchmark run.

    Attributes:
        split: Split that was decoded.
        utterances: Number of utterances decoded.
        workers: Declared decode parallelism.
        repetitions: Timed runs per system.
        baseline: Reference system name.
        systems: Per-system aggregates.
        pairwise: Significance tests against the baseline.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    split: str
    utterances: int
    workers: int
    repetitions: int
    baseline: str
    systems: list[SystemReport]
    pairwise: list[PairwiseSignificance]

    def system(self, name: str) -> SystemReport:
        for report in self.systems:
            if report.name == name:
                return report
        raise KeyError(name)


class SweepRow(BaseModel):
    """One row of the density/oracle sweep CSV."""

    system: str
    K: int
    density: float
    oracle_wer: float
