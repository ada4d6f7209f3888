"""
Self-attention masks for the two decoder branches.

Block indices are 1-based and inclusive, matching the label-slot numbering
used by block schedules.
"""

from dataclasses import dataclass

import numpy as np

from exceptions import ContractViolation, EmptyInputError
from tensor_core import MASK_VALUE


@dataclass(frozen=True)
class AttentionMask:
    """
    Boolean query x key matrix; allowed[q][k] is True when query q may attend to key k.
    """

    allowed: np.ndarray

    def additive(self) -> np.ndarray:
        """0 where attention is allowed, MASK_VALUE elsewhere."""
        return np.where(self.allowed, 0.0, MASK_VALUE)

    @property
    def length(self) -> int:
        return self.allowed.shape[0]


def build_causal_mask(length: int) -> AttentionMask:
    """
    Lower-triangular mask for left-to-right decoding.

    Raises:
        EmptyInputError: If length is 0.
    """
    if length <= 0:
        raise EmptyInputError(f"causal mask needs length >= 1, got {length}")
    return AttentionMask(np.tril(np.ones((length, length), dtype=bool)))


def build_block_mask(length: int, block_start: int, block_end: int) -> AttentionMask:
    """
    Conceal slots block_start..block_end from every query.

    Attention is otherwise bidirectional: each query sees the left context
    before the block and the right context after it.

    Raises:
        ContractViolation: If the block does not satisfy 1 <= start <= end <= length.
    """
    if not 1 <= block_start <= block_end <= length:
        raise ContractViolation(
            f"block [{block_start}, {block_end}] outside sequence of length {length}"
        )
    keys = np.arange(1, length + 1)
    visible = (keys < block_start) | (keys > block_end)
    return AttentionMask(np.broadcast_to(visible, (length, length)).copy())
