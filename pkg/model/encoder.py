"""
Plain transformer encoder with frame-stacking subsampling.
"""

from dataclasses import dataclass

import numpy as np

from exceptions import ContractViolation, EmptyInputError
from model.layers import encoder_layer, linear, norm
from model.params import ENCODER, ModelParams, sinusoidal_table
from tensor_core import Tensor, add


@dataclass(frozen=True)
class EncoderOutput:
    """
    Encoder states the decoders attend over.

    Attributes:
        frames: (T', d_model) tensor.
        frame_count: T' = ceil(T / subsample_factor).
    """

    frames: Tensor
    frame_count: int


def stack_frames(features: np.ndarray, factor: int) -> np.ndarray:
    """
    Concatenate every `factor` consecutive frames into one wider frame.

    The tail is zero-padded so T' = ceil(T / factor).
    """
    t, dim = features.shape
    out_frames = -(-t // factor)
    padded = np.zeros((out_frames * factor, dim))
    padded[:t] = features
    return padded.reshape(out_frames, factor * dim)


def encoder_forward(features: np.ndarray, params: ModelParams) -> EncoderOutput:
    """
    Encode a (T, feature_dim) feature matrix.

    Args:
        features: Input frames.
        params: Model parameters.

    Returns:
        EncoderOutput with T' = ceil(T / subsample_factor) frames.

    Raises:
        EmptyInputError: If T is 0.
        ContractViolation: If the feature width is wrong, T < subsample_factor,
            or the features are not finite.
    """
    config = params.config
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] == 0:
        raise EmptyInputError(f"encoder needs a non-empty (T, {config.feature_dim}) matrix, got {features.shape}")
    if features.shape[1] != config.feature_dim:
        raise ContractViolation(
            f"encoder: shape mismatch {features.shape} vs (T, {config.feature_dim})"
        )
    if features.shape[0] < config.subsample_factor:
        raise ContractViolation(
            f"encoder needs T >= {config.subsample_factor} frames, got {features.shape[0]}"
        )
    if not np.all(np.isfinite(features)):
        raise ContractViolation("encoder: features contain non-finite values")

    stacked = stack_frames(features, config.subsample_factor)
    x = linear(Tensor(stacked), params, f"{ENCODER}.input")
    x = add(x, Tensor(sinusoidal_table(stacked.shape[0], config.d_model)))
    for i in range(config.n_encoder_layers):
        x = encoder_layer(x, params, f"{ENCODER}.layers.{i}")
    x = norm(x, params, f"{ENCODER}.final_ln")
    return EncoderOutput(frames=x, frame_count=stacked.shape[0])
