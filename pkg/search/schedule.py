"""
Block schedules: partitions of label slots 1..L into contiguous blocks.

Fixed(B) tiles the sentence with blocks of width B anchored at slot 1.
Mixed(N, B) decodes the first N slots one at a time, then tiles the rest.
"""

from dataclasses import dataclass

from exceptions import ContractViolation, EmptyInputError
from schemas.decode_schema import SchedulePlan


@dataclass(frozen=True)
class BlockSchedule:
    """
    Ordered (start, end) pairs, 1-based and inclusive.

    Attributes:
        blocks: Consecutive non-overlapping blocks.
    """

    blocks: tuple[tuple[int, int], ...]

    @property
    def length(self) -> int:
        """Number of slots covered."""
        return self.blocks[-1][1] if self.blocks else 0

    def __len__(self) -> int:
        return len(self.blocks)

    def validate(self, length: int) -> None:
        """
        Check that the blocks partition [1, length].

        Raises:
            ContractViolation: On a gap, an overlap or a wrong total length.
        """
        expected_start = 1
        for start, end in self.blocks:
            if start != expected_start or end < start:
                raise ContractViolation(
                    f"schedule {list(self.blocks)} does not partition [1, {length}]"
                )
            expected_start = end + 1
        if expected_start != length + 1:
            raise ContractViolation(f"schedule {list(self.blocks)} does not partition [1, {length}]")


def tile_blocks(length: int, block_size: int, start: int = 1) -> list[tuple[int, int]]:
    """Blocks of width block_size from `start` to `length`, the last one possibly shorter."""
    if block_size < 1:
        raise ContractViolation(f"block size must be >= 1, got {block_size}")
    return [(s, min(s + block_size - 1, length)) for s in range(start, length + 1, block_size)]


def make_schedule(length: int, plan: SchedulePlan) -> BlockSchedule:
    """
    Build the schedule of a plan for a sentence of `length` slots.

    Args:
        length: L, the number of label slots.
        plan: Fixed(B) or Mixed(N, B).

    Returns:
        The BlockSchedule; Mixed(N, B) with N >= L is all singletons.

    Raises:
        EmptyInputError: If length is below 1.
    """
    if length < 1:
        raise EmptyInputError(f"schedule needs length >= 1, got {length}")
    if plan.kind == "fixed":
        return BlockSchedule(tuple(tile_blocks(length, plan.block_size)))
    singles = min(plan.prefix_steps, length)
    blocks = [(j, j) for j in range(1, singles + 1)]
    blocks += tile_blocks(length, plan.block_size, start=singles + 1)
    return BlockSchedule(tuple(blocks))


def count_decoder_calls(schedule: BlockSchedule, length: int) -> tuple[int, int]:
    """
    Decoder invocations along one path.

    Returns:
        (AMD calls, AR-equivalent calls) = (number of blocks, L).
    """
    schedule.validate(length)
    return len(schedule.blocks), length
