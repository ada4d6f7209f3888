"""
Primitive differentiable operations.

Each primitive computes its forward value with numpy and registers a closure
returning one gradient per input (None for inputs without gradients).
"""

from typing import Optional, Sequence

import numpy as np
from scipy.special import erf

from exceptions import ContractViolation
from tensor_core.tensor import Tensor, make_node

# Additive value standing in for -inf in attention masks.
MASK_VALUE = -1e30

_SQRT_2 = np.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _check_leading_broadcast(a: tuple[int, ...], b: tuple[int, ...], op: str) -> None:
    """Operands must match or one must be a trailing suffix of the other (or a scalar)."""
    if a == b or len(a) == 0 or len(b) == 0:
        return
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    if long_[len(long_) - len(short):] != short:
        raise ContractViolation(f"{op}: shape mismatch {a} vs {b}")


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a gradient over the leading axes an operand was broadcast along."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    if len(shape) == 0:
        return grad.reshape(())
    return grad


# Elementwise

def add(a: Tensor, b: Tensor) -> Tensor:
    _check_leading_broadcast(a.shape, b.shape, "add")
    out = a.data + b.data

    def grad_fn(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return make_node(out, (a, b), grad_fn, "add")


def multiply(a: Tensor, b: Tensor) -> Tensor:
    _check_leading_broadcast(a.shape, b.shape, "multiply")
    out = a.data * b.data

    def grad_fn(g):
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return make_node(out, (a, b), grad_fn, "multiply")


def scale(a: Tensor, factor: float) -> Tensor:
    out = a.data * factor

    def grad_fn(g):
        return (g * factor,)

    return make_node(out, (a,), grad_fn, "scale")


def exp(a: Tensor) -> Tensor:
    out = np.exp(a.data)

    def grad_fn(g):
        return (g * out,)

    return make_node(out, (a,), grad_fn, "exp")


def log(a: Tensor) -> Tensor:
    out = np.log(a.data)

    def grad_fn(g):
        return (g / a.data,)

    return make_node(out, (a,), grad_fn, "log")


def relu(a: Tensor) -> Tensor:
    positive = a.data > 0
    out = np.where(positive, a.data, 0.0)

    def grad_fn(g):
        return (g * positive,)

    return make_node(out, (a,), grad_fn, "relu")


def gelu(a: Tensor) -> Tensor:
    """Exact GELU, x * Phi(x)."""
    x = a.data
    cdf = 0.5 * (1.0 + erf(x / _SQRT_2))
    out = x * cdf

    def grad_fn(g):
        pdf = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
        return (g * (cdf + x * pdf),)

    return make_node(out, (a,), grad_fn, "gelu")


# Linear algebra and shape

def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ContractViolation(f"matmul: shape mismatch {a.shape} vs {b.shape}")
    _check_leading_broadcast(a.shape[:-2], b.shape[:-2], "matmul")
    out = np.matmul(a.data, b.data)

    def grad_fn(g):
        ga = np.matmul(g, np.swapaxes(b.data, -1, -2)) if a.requires_grad else None
        gb = np.matmul(np.swapaxes(a.data, -1, -2), g) if b.requires_grad else None
        return (
            None if ga is None else _unbroadcast(ga, a.shape),
            None if gb is None else _unbroadcast(gb, b.shape),
        )

    return make_node(out, (a, b), grad_fn, "matmul")


def transpose(a: Tensor, axes: Optional[Sequence[int]] = None) -> Tensor:
    """Permute axes; the default swaps the last two."""
    if axes is None:
        if a.ndim < 2:
            raise ContractViolation(f"transpose: needs at least 2 dims, got {a.shape}")
        axes = list(range(a.ndim))
        axes[-1], axes[-2] = axes[-2], axes[-1]
    axes = tuple(axes)
    if sorted(axes) != list(range(a.ndim)):
        raise ContractViolation(f"transpose: axes {axes} do not permute shape {a.shape}")
    inverse = tuple(np.argsort(axes))
    out = np.transpose(a.data, axes)

    def grad_fn(g):
        return (np.transpose(g, inverse),)

    return make_node(out, (a,), grad_fn, "transpose")


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    shape = tuple(shape)
    if int(np.prod(shape)) != a.size:
        raise ContractViolation(f"reshape: cannot view {a.shape} as {shape}")
    out = a.data.reshape(shape)

    def grad_fn(g):
        return (g.reshape(a.shape),)

    return make_node(out, (a,), grad_fn, "reshape")


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise ContractViolation("concat: no tensors given")
    ref = tensors[0].shape
    ax = axis % len(ref)
    for t in tensors[1:]:
        if len(t.shape) != len(ref) or any(
            d1 != d2 for i, (d1, d2) in enumerate(zip(ref, t.shape)) if i != ax
        ):
            raise ContractViolation(f"concat: shape mismatch {ref} vs {t.shape}")
    out = np.concatenate([t.data for t in tensors], axis=ax)
    bounds = np.cumsum([t.shape[ax] for t in tensors])[:-1]

    def grad_fn(g):
        return tuple(np.split(g, bounds, axis=ax))

    return make_node(out, tuple(tensors), grad_fn, "concat")


def index(a: Tensor, key) -> Tensor:
    """Slice or gather with any numpy index; repeated indices accumulate."""
    out = np.array(a.data[key], dtype=np.float64)

    def grad_fn(g):
        full = np.zeros_like(a.data)
        np.add.at(full, key, g)
        return (full,)

    return make_node(out, (a,), grad_fn, "index")


def embedding(table: Tensor, ids) -> Tensor:
    """Row lookup: table (V, d), integer ids of any shape -> ids.shape + (d,)."""
    ids = np.asarray(ids, dtype=np.int64)
    if table.ndim != 2:
        raise ContractViolation(f"embedding: table must be 2-D, got {table.shape}")
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise ContractViolation(
            f"embedding: ids outside [0, {table.shape[0]}) for table {table.shape}"
        )
    out = table.data[ids]

    def grad_fn(g):
        full = np.zeros_like(table.data)
        np.add.at(full, ids, g)
        return (full,)

    return make_node(out, (table,), grad_fn, "embedding")


# Reductions

def reduce_sum(a: Tensor, axis: Optional[int] = None) -> Tensor:
    out = a.data.sum(axis=axis)

    def grad_fn(g):
        if axis is None:
            return (np.broadcast_to(g, a.shape).copy(),)
        return (np.broadcast_to(np.expand_dims(g, axis), a.shape).copy(),)

    return make_node(out, (a,), grad_fn, "reduce_sum")


def reduce_mean(a: Tensor, axis: Optional[int] = None) -> Tensor:
    count = a.size if axis is None else a.shape[axis]
    return scale(reduce_sum(a, axis), 1.0 / count)


# Normalisation

def masked_softmax(a: Tensor, mask: Optional[np.ndarray] = None) -> Tensor:
    """
    Softmax over the last axis after adding an additive mask.

    -inf entries in the mask are clamped to MASK_VALUE. A row whose every key
    is masked yields the uniform distribution and passes no gradient.
    """
    x = a.data
    fully_masked = None
    if mask is not None:
        mask = np.maximum(np.asarray(mask, dtype=np.float64), MASK_VALUE)
        try:
            x = x + mask
        except ValueError as exc:
            raise ContractViolation(
                f"masked_softmax: shape mismatch {a.shape} vs {mask.shape}"
            ) from exc
        blocked = mask <= MASK_VALUE / 2
        fully_masked = np.broadcast_to(blocked.all(axis=-1, keepdims=True), x.shape[:-1] + (1,))
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=-1, keepdims=True)
    if fully_masked is not None and fully_masked.any():
        out = np.where(fully_masked, 1.0 / x.shape[-1], out)

    def grad_fn(g):
        gx = out * (g - (g * out).sum(axis=-1, keepdims=True))
        if fully_masked is not None:
            gx = np.where(fully_masked, 0.0, gx)
        return (gx,)

    return make_node(out, (a,), grad_fn, "masked_softmax")


def log_softmax(a: Tensor) -> Tensor:
    x = a.data
    shifted = x - x.max(axis=-1, keepdims=True)
    out = shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))

    def grad_fn(g):
        return (g - np.exp(out) * g.sum(axis=-1, keepdims=True),)

    return make_node(out, (a,), grad_fn, "log_softmax")


def layer_norm(a: Tensor, gamma: Tensor, beta: Tensor, eps: float = 1e-5) -> Tensor:
    """Normalise over the last axis, then scale by gamma and shift by beta."""
    if gamma.shape != (a.shape[-1],) or beta.shape != (a.shape[-1],):
        raise ContractViolation(
            f"layer_norm: shape mismatch {a.shape} vs gamma {gamma.shape} / beta {beta.shape}"
        )
    x = a.data
    n = x.shape[-1]
    mean = x.mean(axis=-1, keepdims=True)
    centered = x - mean
    inv_std = 1.0 / np.sqrt((centered ** 2).mean(axis=-1, keepdims=True) + eps)
    xhat = centered * inv_std
    out = xhat * gamma.data + beta.data

    def grad_fn(g):
        dxhat = g * gamma.data
        dx = inv_std / n * (
            n * dxhat
            - dxhat.sum(axis=-1, keepdims=True)
            - xhat * (dxhat * xhat).sum(axis=-1, keepdims=True)
        )
        lead = tuple(range(g.ndim - 1))
        return dx, (g * xhat).sum(axis=lead), g.sum(axis=lead)

    return make_node(out, (a, gamma, beta), grad_fn, "layer_norm")
