"""
Reverse-mode automatic differentiation over dense float64 arrays.

A Tensor wraps a numpy array and, when gradients are enabled, remembers the
tensors it was computed from together with a closure that maps the output
gradient to the gradients of those inputs. backward() walks the recorded
graph once in reverse topological order.

Operands may only broadcast over leading dimensions (a bias of shape (d,)
against (L, d), a weight of shape (d, k) against a batch (N, L, d)); any other
shape disagreement is a ContractViolation naming both shapes.
"""

import threading
from contextlib import contextmanager
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from exceptions import ContractViolation

GradFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_state = threading.local()


def is_grad_enabled() -> bool:
    """Whether operations on this thread record a graph."""
    return getattr(_state, "grad_enabled", True)


@contextmanager
def no_grad() -> Iterator[None]:
    """
    Disable graph recording on the current thread.

    Forward values are unchanged; only the backward bookkeeping is skipped,
    which is what decoding wants.
    """
    previous = is_grad_enabled()
    _state.grad_enabled = False
    try:
        yield
    finally:
        _state.grad_enabled = previous


class Tensor:
    """
    A node in a reverse-mode differentiation graph.

    Attributes:
        data: The float64 values.
        grad: Gradient of the last backward root w.r.t. this node. Set for
            intermediate nodes only; leaf gradients are returned by backward().
        requires_grad: Whether gradients flow to this node.
        name: Optional label, used for parameters.
    """

    __slots__ = ("data", "grad", "requires_grad", "name", "_prev", "_grad_fn", "_op")

    def __init__(
        self,
        data,
        requires_grad: bool = False,
        name: Optional[str] = None,
        _children: tuple["Tensor", ...] = (),
        _grad_fn: Optional[GradFn] = None,
        _op: str = "",
    ):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.name = name
        self._prev = _children
        self._grad_fn = _grad_fn
        self._op = _op

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def is_leaf(self) -> bool:
        return not self._prev

    def numpy(self) -> np.ndarray:
        """Return the underlying array (not a copy)."""
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, op={self._op or 'leaf'}{label})"

    # Operator sugar; the primitive definitions live in tensor_core.ops.
    def __add__(self, other):
        from tensor_core import ops
        return ops.add(self, as_tensor(other))

    def __radd__(self, other):
        from tensor_core import ops
        return ops.add(as_tensor(other), self)

    def __sub__(self, other):
        from tensor_core import ops
        return ops.add(self, ops.scale(as_tensor(other), -1.0))

    def __rsub__(self, other):
        from tensor_core import ops
        return ops.add(as_tensor(other), ops.scale(self, -1.0))

    def __neg__(self):
        from tensor_core import ops
        return ops.scale(self, -1.0)

    def __mul__(self, other):
        from tensor_core import ops
        if isinstance(other, (int, float)):
            return ops.scale(self, float(other))
        return ops.multiply(self, as_tensor(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __matmul__(self, other):
        from tensor_core import ops
        return ops.matmul(self, as_tensor(other))

    def __getitem__(self, key):
        from tensor_core import ops
        return ops.index(self, key)


def as_tensor(value) -> Tensor:
    """Wrap a constant as a Tensor that does not require gradients."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def make_node(
    data: np.ndarray,
    parents: tuple[Tensor, ...],
    grad_fn: GradFn,
    op: str,
) -> Tensor:
    """
    Create the output node of a primitive.

    The graph edge and closure are only kept when recording is enabled and
    at least one parent needs gradients.
    """
    requires = is_grad_enabled() and any(p.requires_grad for p in parents)
    if not requires:
        return Tensor(data, _op=op)
    return Tensor(data, requires_grad=True, _children=parents, _grad_fn=grad_fn, _op=op)


def _topological_order(root: Tensor) -> list[Tensor]:
    order: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._prev:
            if parent.requires_grad and id(parent) not in visited:
                stack.append((parent, False))
    return order


def backward(root: Tensor) -> dict[Tensor, np.ndarray]:
    """
    Back-propagate from a scalar root.

    Every node of the graph is visited exactly once, in reverse topological
    order. Leaf gradients are returned rather than stored on the leaves, so
    graphs that share parameters never write to shared state.

    Args:
        root: A tensor holding exactly one value.

    Returns:
        Mapping from each gradient-requiring leaf to d(root)/d(leaf).

    Raises:
        ContractViolation: If the root is not scalar.
    """
    if root.size != 1:
        raise ContractViolation(f"backward() needs a scalar root, got shape {root.shape}")

    leaves: dict[Tensor, np.ndarray] = {}
    if not root.requires_grad:
        return leaves

    grads: dict[int, np.ndarray] = {id(root): np.ones_like(root.data)}
    for node in reversed(_topological_order(root)):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        if node.is_leaf:
            leaves[node] = g
            continue
        node.grad = g
        parent_grads = node._grad_fn(g)
        for parent, pg in zip(node._prev, parent_grads):
            if pg is None or not parent.requires_grad:
                continue
            if id(parent) in grads:
                grads[id(parent)] = grads[id(parent)] + pg
            else:
                grads[id(parent)] = pg
    return leaves
