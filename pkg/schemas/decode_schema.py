"""
Pydantic schemas for decoding: fusion weights, block schedules, decoder
systems and per-utterance output records.
"""

import re
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DecodeMode = Literal["ctc", "greedy-ar", "beam-ctc-ar", "amd"]

_SCHEDULE_PATTERN = re.compile(r"^(fixed):(\d+)$|^(mixed):(\d+)-(\d+)$")


class FusionWeights(BaseModel):
    """
    Weights of the fused ranking score.

    Attributes:
        lambda_ctc: Weight of the CTC prefix score.
        lambda_amd: Weight of the accumulated AMD score.
        lambda_ar: Weight of the accumulated AR score.
    """

    lambda_ctc: float = Field(default=0.3, ge=0.0)
    lambda_amd: float = Field(default=0.3, ge=0.0)
    lambda_ar: float = Field(default=0.4, ge=0.0)

    @classmethod
    def baseline(cls) -> "FusionWeights":
        """CTC:AR = 0.7:0.3, the hybrid baseline weighting."""
        return cls(lambda_ctc=0.7, lambda_amd=0.0, lambda_ar=0.3)

    @classmethod
    def parse(cls, text: str, mode: DecodeMode) -> "FusionWeights":
        """
        Parse a --lambdas flag.

        CTC+AR modes take "ctc,ar"; the AMD mode takes "ctc,amd,ar".

        Raises:
            ValueError: On a wrong number of fields or non-numeric values.
        """
        values = [float(p) for p in text.split(",")]
        if mode == "amd":
            if len(values) != 3:
                raise ValueError(f"amd mode expects --lambdas ctc,amd,ar, got {text!r}")
            return cls(lambda_ctc=values[0], lambda_amd=values[1], lambda_ar=values[2])
        if len(values) != 2:
            raise ValueError(f"{mode} mode expects --lambdas ctc,ar, got {text!r}")
        return cls(lambda_ctc=values[0], lambda_amd=0.0, lambda_ar=values[1])


class SchedulePlan(BaseModel):
    """
    A block schedule family.

    Attributes:
        kind: "fixed" for uniform tiling, "mixed" for singleton steps first.
        block_size: B, the tile width.
        prefix_steps: N, singleton blocks before tiling (mixed only).
    """

    kind: Literal["fixed", "mixed"] = "fixed"
    block_size: int = Field(default=8, ge=1)
    prefix_steps: int = Field(default=0, ge=0)

    @classmethod
    def parse(cls, text: str) -> "SchedulePlan":
        """
        Parse "fixed:B" or "mixed:N-B".

        Raises:
            ValueError: If the text matches neither form.
        """
        match = _SCHEDULE_PATTERN.match(text.strip())
        if not match:
            raise ValueError(f"bad schedule {text!r}; expected fixed:B or mixed:N-B")
        if match.group(1):
            return cls(kind="fixed", block_size=int(match.group(2)))
        return cls(kind="mixed", prefix_steps=int(match.group(4)), block_size=int(match.group(5)))

    def __str__(self) -> str:
        if self.kind == "fixed":
            return f"fixed:{self.block_size}"
        return f"mixed:{self.prefix_steps}-{self.block_size}"


class DecodeSystem(BaseModel):
    """
    One decoding configuration.

    Attributes:
        name: Label used in reports.
        mode: Decoding strategy.
        beam: Beam width of the CTC+AR search.
        weights: Fusion weights; defaults depend on the mode.
        schedule: Block schedule of the AMD search.
        k_amd: In-block pruning width.
        k_main: Post-block beam width.
        ar_per_slot: Compute the AR score after every slot instead of every block.
        nbest: Hypotheses kept in the N-best list.
        length_bonus: Score added per emitted token in the CTC+AR search.
        max_len: Longest hypothesis of the CTC+AR search; None uses the model limit.
    """

    name: str = "amd"
    mode: DecodeMode = "amd"
    beam: int = Field(default=10, ge=1)
    weights: Optional[FusionWeights] = None
    # Config files carry the "fixed:B" / "mixed:N-B" text form; it is parsed on validation.
    schedule: Union[SchedulePlan, str] = Field(default_factory=SchedulePlan)
    k_amd: int = Field(default=10, ge=1)
    k_main: int = Field(default=10, ge=1)
    ar_per_slot: bool = False
    nbest: int = Field(default=100, ge=1)
    length_bonus: float = 0.0
    max_len: Optional[int] = Field(default=None, ge=1)

    @field_validator("schedule", mode="before")
    @classmethod
    def _parse_schedule(cls, value):
        if isinstance(value, str):
            return SchedulePlan.parse(value)
        return value

    @model_validator(mode="after")
    def _default_weights(self) -> "DecodeSystem":
        if self.weights is None:
            self.weights = FusionWeights() if self.mode == "amd" else FusionWeights.baseline()
        return self

    def describe(self) -> str:
        if self.mode == "amd":
            return f"{self.name} (amd {self.schedule}, K_AMD={self.k_amd}, K_main={self.k_main})"
        if self.mode == "beam-ctc-ar":
            return f"{self.name} (beam-ctc-ar, beam={self.beam})"
        return f"{self.name} ({self.mode})"


class ScoredHypothesis(BaseModel):
    """
    One N-best entry.

    Attributes:
        tokens: Label ids without sos/eos.
        text: Rendered tokens.
        alpha_ctc: CTC prefix (or terminated) log-score.
        alpha_ar: Accumulated AR log-score.
        alpha_amd: Accumulated AMD log-score.
        score: Fused score used for ranking.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    tokens: list[int]
    text: str = ""
    alpha_ctc: float
    alpha_ar: float = 0.0
    alpha_amd: float = 0.0
    score: float


class NBestList(BaseModel):
    """
    Ranked hypotheses of one utterance, best first.

    Attributes:
        utterance_id: Utterance the list belongs to.
        hypotheses: Entries ordered by score, ties by token sequence.
        empty_result: Set when the search produced nothing to rank.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    utterance_id: str = ""
    hypotheses: list[ScoredHypothesis] = Field(default_factory=list)
    empty_result: bool = False

    @property
    def best(self) -> Optional[ScoredHypothesis]:
        return self.hypotheses[0] if self.hypotheses else None

    def best_tokens(self) -> list[int]:
        return list(self.best.tokens) if self.best else []


class DecodeRecord(BaseModel):
    """
    Output record of one decoded utterance (one JSON line).

    Attributes:
        utterance_id: Utterance id.
        system: Name of the decoding system.
        reference: Reference token ids.
        reference_text: Rendered reference.
        hypothesis: 1-best token ids.
        hypothesis_text: Rendered 1-best.
        nbest: Ranked hypotheses with component scores.
        errors: Edit distance between reference and 1-best.
        decode_seconds: Wall-clock decode time.
        duration_seconds: Audio duration of the utterance.
        amd_calls: AMD decoder invocations.
        ar_calls: AR decoder invocations.
        empty_result: Set when the search produced no hypothesis.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    utterance_id: str
    system: str
    reference: list[int]
    reference_text: str
    hypothesis: list[int]
    hypothesis_text: str
    nbest: list[ScoredHypothesis]
    errors: int
    decode_seconds: float
    duration_seconds: float
    amd_calls: int = 0
    ar_calls: int = 0
    empty_result: bool = False
