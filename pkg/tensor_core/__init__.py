"""
Tensor core for the AMD decoding toolkit.

A small reverse-mode automatic differentiation engine over float64 numpy
arrays, with exactly the primitives the micro transformer needs.
"""

from tensor_core.tensor import Tensor, as_tensor, backward, is_grad_enabled, no_grad
from tensor_core.ops import (
    MASK_VALUE,
    add,
    concat,
    embedding,
    exp,
    gelu,
    index,
    layer_norm,
    log,
    log_softmax,
    masked_softmax,
    matmul,
    multiply,
    reduce_mean,
    reduce_sum,
    relu,
    reshape,
    scale,
    transpose,
)

__all__ = [
    # Graph
    "Tensor",
    "as_tensor",
    "backward",
    "is_grad_enabled",
    "no_grad",
    # Primitives
    "MASK_VALUE",
    "add",
    "concat",
    "embedding",
    "exp",
    "gelu",
    "index",
    "layer_norm",
    "log",
    "log_softmax",
    "masked_softmax",
    "matmul",
    "multiply",
    "reduce_mean",
    "reduce_sum",
    "relu",
    "reshape",
    "scale",
    "transpose",
]
