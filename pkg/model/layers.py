"""
Transformer building blocks written against the tensor core.

Hidden states have shape (..., L, d_model); leading axes are batch axes.
"""

from typing import Optional

import numpy as np

from model.params import ModelParams
from tensor_core import (
    Tensor,
    add,
    gelu,
    layer_norm,
    masked_softmax,
    matmul,
    relu,
    reshape,
    scale,
    transpose,
)


def linear(x: Tensor, params: ModelParams, prefix: str) -> Tensor:
    return add(matmul(x, params[f"{prefix}.weight"]), params[f"{prefix}.bias"])


def norm(x: Tensor, params: ModelParams, prefix: str) -> Tensor:
    return layer_norm(x, params[f"{prefix}.gamma"], params[f"{prefix}.beta"])


def _split_heads(x: Tensor, n_heads: int) -> Tensor:
    """(..., L, d) -> (..., H, L, d/H)."""
    lead = x.shape[:-2]
    length, d = x.shape[-2:]
    x = reshape(x, lead + (length, n_heads, d // n_heads))
    nd = len(lead)
    return transpose(x, tuple(range(nd)) + (nd + 1, nd, nd + 2))


def _merge_heads(x: Tensor) -> Tensor:
    """(..., H, L, d/H) -> (..., L, d)."""
    lead = x.shape[:-3]
    n_heads, length, head_dim = x.shape[-3:]
    nd = len(lead)
    x = transpose(x, tuple(range(nd)) + (nd + 1, nd, nd + 2))
    return reshape(x, lead + (length, n_heads * head_dim))


def multi_head_attention(
    query: Tensor,
    memory: Tensor,
    params: ModelParams,
    prefix: str,
    mask: Optional[np.ndarray] = None,
) -> Tensor:
    """
    Scaled dot-product attention of query rows over memory rows.

    Args:
        query: (..., Lq, d) hidden states.
        memory: (..., Lk, d) states to attend over; may have fewer leading axes.
        params: Model parameters.
        prefix: Name prefix of the q/k/v/o projections.
        mask: Additive mask broadcastable to (..., H, Lq, Lk).

    Returns:
        (..., Lq, d) attended states.
    """
    n_heads = params.config.n_heads
    q = _split_heads(linear(query, params, f"{prefix}.q"), n_heads)
    k = _split_heads(linear(memory, params, f"{prefix}.k"), n_heads)
    v = _split_heads(linear(memory, params, f"{prefix}.v"), n_heads)
    scores = scale(matmul(q, transpose(k)), 1.0 / np.sqrt(params.config.head_dim))
    weights = masked_softmax(scores, mask)
    return linear(_merge_heads(matmul(weights, v)), params, f"{prefix}.o")


def feed_forward(x: Tensor, params: ModelParams, prefix: str) -> Tensor:
    activation = gelu if params.config.activation == "gelu" else relu
    hidden = activation(add(matmul(x, params[f"{prefix}.w1"]), params[f"{prefix}.b1"]))
    return add(matmul(hidden, params[f"{prefix}.w2"]), params[f"{prefix}.b2"])


def encoder_layer(x: Tensor, params: ModelParams, prefix: str) -> Tensor:
    """Pre-norm self-attention block followed by a pre-norm feed-forward block."""
    h = norm(x, params, f"{prefix}.ln1")
    x = add(x, multi_head_attention(h, h, params, f"{prefix}.self_attn"))
    return add(x, feed_forward(norm(x, params, f"{prefix}.ln2"), params, f"{prefix}.ffn"))


def decoder_layer(
    x: Tensor,
    memory: Tensor,
    params: ModelParams,
    prefix: str,
    self_mask: np.ndarray,
) -> Tensor:
    """Masked self-attention, cross-attention over the encoder, feed-forward; all pre-norm."""
    h = norm(x, params, f"{prefix}.ln1")
    x = add(x, multi_head_attention(h, h, params, f"{prefix}.self_attn", self_mask))
    x = add(x, multi_head_attention(norm(x, params, f"{prefix}.ln2"), memory, params, f"{prefix}.cross_attn"))
    return add(x, feed_forward(norm(x, params, f"{prefix}.ln3"), params, f"{prefix}.ffn"))
