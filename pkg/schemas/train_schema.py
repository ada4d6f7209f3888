"""
Pydantic schemas for training: loss weights, optimizer settings and metrics lines.
"""

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class LossWeights(BaseModel):
    """
    Interpolation weights of the tripartite loss.

    Attributes:
        gamma_ctc: Weight of the CTC loss.
        gamma_ar: Weight of the AR decoder cross-entropy.
        gamma_amd: Weight of the AMD decoder loss.
    """

    gamma_ctc: float = Field(default=0.4, ge=0.0)
    gamma_ar: float = Field(default=0.3, ge=0.0)
    gamma_amd: float = Field(default=0.3, ge=0.0)

    @model_validator(mode="after")
    def _positive_total(self) -> "LossWeights":
        if self.gamma_ctc + self.gamma_ar + self.gamma_amd <= 0:
            raise ValueError("at least one loss weight must be positive")
        return self

    @classmethod
    def parse(cls, text: str) -> "LossWeights":
        """Parse a "ctc,ar,amd" flag such as "0.4,0.3,0.3"."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated weights, got {text!r}")
        ctc, ar, amd = (float(p) for p in parts)
        return cls(gamma_ctc=ctc, gamma_ar=ar, gamma_amd=amd)


class TrainConfig(BaseModel):
    """
    Optimisation settings.

    The learning rate follows peak_lr * min(step / warmup_steps, sqrt(warmup_steps / step)).

    Attributes:
        weights: Loss interpolation weights.
        peak_lr: Learning rate reached at the end of warmup.
        warmup_steps: Linear warmup length in optimizer steps.
        batch_size: Utterances per optimizer step.
        epochs: Passes over the training split.
        seed: Root seed of the init/blocks/shuffle streams.
        n_block_samples: Block sizes drawn per utterance for the AMD loss.
        beta1: First-moment decay.
        beta2: Second-moment decay.
        adam_eps: Denominator stabiliser.
        dev_eval_limit: Dev utterances decoded for the per-epoch error rate (0 disables).
    """

    weights: LossWeights = Field(default_factory=LossWeights)
    peak_lr: float = Field(default=2e-3, ge=0.0)
    warmup_steps: int = Field(default=200, ge=1)
    batch_size: int = Field(default=8, ge=1)
    epochs: int = Field(default=30, ge=0)
    seed: int = Field(default=0, ge=0)
    n_block_samples: int = Field(default=4, ge=1)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.98, ge=0.0, lt=1.0)
    adam_eps: float = Field(default=1e-9, gt=0.0)
    dev_eval_limit: int = Field(default=50, ge=0)


class EpochMetrics(BaseModel):
    """
    One line of the metrics log.

    Attributes:
        epoch: 1-based epoch number.
        step: Optimizer steps taken so far.
        loss: Mean tripartite loss over the epoch's batches.
        ctc_loss: Mean per-utterance CTC loss.
        ar_loss: Mean per-utterance AR loss.
        amd_loss: Mean per-utterance AMD loss.
        skipped_infeasible: Utterances whose CTC term was skipped.
        learning_rate: Rate used on the last step of the epoch.
        dev_token_error_rate: Greedy error rate on the dev subset, if evaluated.
        wall_time: Seconds spent in the epoch.
    """

    epoch: int
    step: int
    loss: float
    ctc_loss: float
    ar_loss: float
    amd_loss: float
    skipped_infeasible: int = 0
    learning_rate: float
    dev_token_error_rate: Optional[float] = None
    wall_time: float = 0.0
