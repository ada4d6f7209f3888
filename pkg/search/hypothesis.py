"""
Search hypotheses and the fused scores that rank them.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional

from ctc.prefix_score import CTCPrefixState
from model.vocab import render_tokens
from schemas.decode_schema import FusionWeights, ScoredHypothesis


@dataclass(frozen=True)
class Hypothesis:
    """
    A partial or complete label sequence with its component log-scores.

    Attributes:
        tokens: Labels, never blank, sos or eos.
        alpha_ctc: CTC prefix score, or the terminated sequence score once ended.
        alpha_ar: Sum of AR log-probabilities over the scored positions.
        alpha_amd: Sum of AMD log-probabilities over committed slots.
        ctc_state: Prefix-scorer state for further extension.
        ended: Set once eos has been scored.
    """

    tokens: tuple[int, ...]
    alpha_ctc: float = 0.0
    alpha_ar: float = 0.0
    alpha_amd: float = 0.0
    ctc_state: Optional[CTCPrefixState] = field(default=None, compare=False, repr=False)
    ended: bool = False


def weighted_sum(terms: Iterable[tuple[float, float]]) -> float:
    """Sum of weight * value, skipping zero weights so 0 * -inf never appears."""
    return sum(w * v for w, v in terms if w != 0.0)


def fused_score_ctc_ar(h: Hypothesis, w: FusionWeights) -> float:
    """lambda_ctc * alpha_CTC + lambda_ar * alpha_AR."""
    return weighted_sum([(w.lambda_ctc, h.alpha_ctc), (w.lambda_ar, h.alpha_ar)])


def in_block_score(h: Hypothesis, w: FusionWeights) -> float:
    """lambda_ctc * alpha_CTC + lambda_amd * alpha_AMD, used for in-block pruning."""
    return weighted_sum([(w.lambda_ctc, h.alpha_ctc), (w.lambda_amd, h.alpha_amd)])


def tripartite_score(h: Hypothesis, w: FusionWeights) -> float:
    """lambda_ctc * alpha_CTC + lambda_amd * alpha_AMD + lambda_ar * alpha_AR."""
    return weighted_sum(
        [(w.lambda_ctc, h.alpha_ctc), (w.lambda_amd, h.alpha_amd), (w.lambda_ar, h.alpha_ar)]
    )


def rank_key(score: float, h: Hypothesis) -> tuple:
    """Sort key: higher score first, then the lexicographically smaller sequence, then ended."""
    return (-score, h.tokens, not h.ended)


def to_scored(h: Hypothesis, score: float) -> ScoredHypothesis:
    return ScoredHypothesis(
        tokens=list(h.tokens),
        text=render_tokens(h.tokens),
        alpha_ctc=h.alpha_ctc,
        alpha_ar=h.alpha_ar,
        alpha_amd=h.alpha_amd,
        score=score,
    )
