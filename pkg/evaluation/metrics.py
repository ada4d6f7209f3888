"""
Error-rate metrics over token sequences.

Edit distances use unit costs for substitution, insertion and deletion.
Alignments used by the lattice density prefer, from left to right, a
match/substitution over an insertion over a deletion.
"""

import logging
from typing import NamedTuple, Optional, Sequence, Union

import editdistance
import numpy as np

from exceptions import EmptyInputError
from schemas.decode_schema import DecodeRecord, NBestList

logger = logging.getLogger(__name__)

# Aligned value of a reference token the hypothesis deleted.
ABSENT = -1

TokenSeq = Sequence[int]
NBestLike = Union[NBestList, Sequence[TokenSeq]]


class WERResult(NamedTuple):
    """
    Attributes:
        errors: Edit distance.
        ref_len: Reference length.
        rate: errors / ref_len; None when the reference is empty.
    """

    errors: int
    ref_len: int
    rate: Optional[float]


def wer(reference: TokenSeq, hypothesis: TokenSeq) -> WERResult:
    """
    Word error rate of one hypothesis.

    Examples:
        >>> wer([1, 2, 3], [1, 9, 3])
        WERResult(errors=1, ref_len=3, rate=0.3333333333333333)
        >>> wer([], [4, 5]).rate is None
        True
    """
    reference = [int(t) for t in reference]
    hypothesis = [int(t) for t in hypothesis]
    if not reference:
        return WERResult(len(hypothesis), 0, None)
    errors = int(editdistance.eval(reference, hypothesis))
    return WERResult(errors, len(reference), errors / len(reference))


def _hypotheses(nbest: NBestLike) -> list[list[int]]:
    if isinstance(nbest, NBestList):
        return [list(h.tokens) for h in nbest.hypotheses]
    return [[int(t) for t in h] for h in nbest]


def oracle_errors(nbest: NBestLike, reference: TokenSeq) -> int:
    """Fewest edit errors of any N-best entry."""
    hypotheses = _hypotheses(nbest)
    if not hypotheses:
        raise EmptyInputError("oracle needs a non-empty N-best list")
    return min(wer(reference, h).errors for h in hypotheses)


def oracle_wer(nbest: NBestLike, reference: TokenSeq) -> float:
    """
    Lowest error rate among the N-best entries.

    Raises:
        EmptyInputError: If the N-best list or the reference is empty.
    """
    if not reference:
        raise EmptyInputError("oracle WER needs a non-empty reference")
    return oracle_errors(nbest, reference) / len(reference)


def align(reference: TokenSeq, hypothesis: TokenSeq) -> list[tuple[Optional[int], Optional[int]]]:
    """
    Minimal edit-distance alignment.

    The cost table is built on the reversed sequences and traced back from
    their end, so ties are decided first for the leftmost positions:
    match/substitution, then insertion, then deletion.

    Returns:
        (reference index, hypothesis token) pairs in left-to-right order.
        Insertions have reference index None, deletions hypothesis token None.
    """
    ref = [int(t) for t in reference][::-1]
    hyp = [int(t) for t in hypothesis][::-1]
    n, m = len(ref), len(hyp)
    cost = np.zeros((n + 1, m + 1), dtype=np.int64)
    cost[:, 0] = np.arange(n + 1)
    cost[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost[i, j] = min(
                cost[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1]),
                cost[i, j - 1] + 1,
                cost[i - 1, j] + 1,
            )

    pairs: list[tuple[Optional[int], Optional[int]]] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and cost[i, j] == cost[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1]):
            pairs.append((n - i, hyp[j - 1]))
            i, j = i - 1, j - 1
        elif j > 0 and cost[i, j] == cost[i, j - 1] + 1:
            pairs.append((None, hyp[j - 1]))
            j -= 1
        else:
            pairs.append((n - i, None))
            i -= 1
    return pairs


def aligned_predictions(nbest: NBestLike, reference: TokenSeq) -> list[set[int]]:
    """Distinct hypothesis tokens aligned to each reference position (ABSENT for deletions)."""
    slots: list[set[int]] = [set() for _ in reference]
    for hypothesis in _hypotheses(nbest):
        for ref_index, token in align(reference, hypothesis):
            if ref_index is not None:
                slots[ref_index].add(ABSENT if token is None else token)
    return slots


def lattice_density(nbest: NBestLike, reference: TokenSeq) -> float:
    """
    Mean number of distinct predictions per reference token.

    Examples:
        >>> lattice_density([[3, 4], [3, 5], [3, 4]], [3, 4])
        1.5

    Raises:
        EmptyInputError: If the reference is empty.
    """
    if not reference:
        raise EmptyInputError("lattice density needs a non-empty reference")
    slots = aligned_predictions(nbest, reference)
    return float(np.mean([len(s) for s in slots]))


def token_error_rate(records: Sequence[DecodeRecord]) -> float:
    """Total errors over total reference tokens of a set of decode records."""
    ref_tokens = sum(len(r.reference) for r in records)
    if ref_tokens == 0:
        raise EmptyInputError("token error rate needs at least one reference token")
    return sum(r.errors for r in records) / ref_tokens


def corpus_oracle_wer(records: Sequence[DecodeRecord]) -> float:
    """Oracle errors summed over utterances, divided by total reference tokens."""
    ref_tokens = sum(len(r.reference) for r in records)
    if ref_tokens == 0:
        raise EmptyInputError("oracle WER needs at least one reference token")
    errors = 0
    for record in records:
        # Empty N-best lists fall back to the (empty) 1-best.
        errors += oracle_errors(record.nbest, record.reference) if record.nbest else record.errors
    return errors / ref_tokens


def corpus_lattice_density(records: Sequence[DecodeRecord]) -> float:
    """Distinct aligned predictions summed over all reference tokens of the split, per token."""
    sizes: list[int] = []
    for record in records:
        hypotheses = [list(h.tokens) for h in record.nbest] or [[]]
        sizes.extend(len(s) for s in aligned_predictions(hypotheses, record.reference))
    if not sizes:
        raise EmptyInputError("lattice density needs at least one reference token")
    return float(np.mean(sizes))
