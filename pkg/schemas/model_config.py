"""
Pydantic schema for the micro transformer architecture.
"""

from typing import Literal

from pydantic import BaseModel, Field, model_validator


class ModelConfig(BaseModel):
    """
    Architecture descriptor shared by the encoder and the three decoder branches.

    Desk-scale defaults; larger models (ff_dim=1024 and up) only need
    different values here.

    Attributes:
        vocab_size: Output vocabulary, including blank, sos/eos and mask ids.
        d_model: Width of every hidden representation.
        n_heads: Attention heads; must divide d_model.
        ff_dim: Inner width of the feed-forward blocks.
        n_encoder_layers: Encoder depth.
        n_decoder_layers: Depth of each decoder stack.
        max_len: Longest decoder input (sos included for the AR branch).
        feature_dim: Width of an input feature frame.
        subsample_factor: Frames stacked into one encoder step.
        share_decoder_weights: When set the AMD branch reuses the AR stack.
        activation: Feed-forward non-linearity.
    """

    # blank, sos/eos and mask come first, so at least one real token needs id 3
    vocab_size: int = Field(default=29, ge=4)
    d_model: int = Field(default=64, gt=0)
    n_heads: int = Field(default=4, gt=0)
    ff_dim: int = Field(default=128, gt=0)
    n_encoder_layers: int = Field(default=2, gt=0)
    n_decoder_layers: int = Field(default=2, gt=0)
    max_len: int = Field(default=64, gt=0)
    feature_dim: int = Field(default=16, gt=0)
    subsample_factor: int = Field(default=2, gt=0)
    share_decoder_weights: bool = False
    activation: Literal["gelu", "relu"] = "gelu"

    @model_validator(mode="after")
    def _heads_divide_width(self) -> "ModelConfig":
        if self.d_model % self.n_heads != 0:
            raise ValueError(
                f"d_model ({self.d_model}) must be divisible by n_heads ({self.n_heads})"
            )
        return self

    @property
    def head_dim(self) -> int:
        return self.d_model // self.n_heads
