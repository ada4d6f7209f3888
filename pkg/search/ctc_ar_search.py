"""
Label-synchronous CTC+AR search.

Every step extends each live hypothesis by every real token and by eos. A
token extension is scored with the CTC prefix score and the accumulated AR
log-probability; eos finalizes the hypothesis with the terminated CTC score.
"""

import logging
from typing import Optional

import numpy as np

from ctc.prefix_score import ctc_initial_state, ctc_prefix_extend_many, ctc_sequence_logprob
from exceptions import ContractViolation
from model.vocab import SOS_EOS_ID, real_token_ids
from schemas.decode_schema import FusionWeights, NBestList
from search.hypothesis import Hypothesis, fused_score_ctc_ar, rank_key, to_scored
from search.scorers import DecoderScorer

logger = logging.getLogger(__name__)


def _label_limit(scorer: DecoderScorer, max_len: Optional[int]) -> int:
    # the AR input also carries sos, and eos is scored one row past the last label
    limit = scorer.max_len - 1
    return limit if max_len is None else min(max_len, limit)


def _expand(
    live: list[Hypothesis],
    scorer: DecoderScorer,
    tokens: list[int],
    allow_tokens: bool,
) -> list[Hypothesis]:
    """All one-step expansions of the live hypotheses, eos included."""
    step = len(live[0].tokens)
    prefixes = np.array([h.tokens for h in live], dtype=np.int64).reshape(len(live), step)
    ar = scorer.ar_rows(prefixes)[:, -1, :]
    expansions = []
    for n, h in enumerate(live):
        expansions.append(
            Hypothesis(
                tokens=h.tokens,
                alpha_ctc=ctc_sequence_logprob(h.ctc_state),
                alpha_ar=h.alpha_ar + float(ar[n, SOS_EOS_ID]),
                ctc_state=h.ctc_state,
                ended=True,
            )
        )
        if not allow_tokens:
            continue
        states, psis = ctc_prefix_extend_many(h.ctc_state, tokens, scorer.ctc_logprobs)
        for k, token in enumerate(tokens):
            expansions.append(
                Hypothesis(
                    tokens=h.tokens + (token,),
                    alpha_ctc=float(psis[k]),
                    alpha_ar=h.alpha_ar + float(ar[n, token]),
                    ctc_state=states[k],
                )
            )
    return expansions


def beam_search_ctc_ar(
    scorer: DecoderScorer,
    beam_size: int,
    weights: FusionWeights,
    max_len: Optional[int] = None,
    nbest: int = 100,
    length_bonus: float = 0.0,
) -> NBestList:
    """
    Hybrid CTC/attention beam search.

    At each step the union of all expansions is cut to the beam_size best by
    lambda_ctc * alpha_CTC + lambda_ar * alpha_AR (+ length_bonus per label);
    expansions ending in eos leave the beam as finished hypotheses. Once a
    prefix reaches max_len labels only eos is allowed, so the search always
    terminates.

    Args:
        scorer: Model (or table) to score with.
        beam_size: Hypotheses kept per step.
        weights: Fusion weights; lambda_amd is ignored.
        max_len: Longest label sequence; defaults to the model limit.
        nbest: Finished hypotheses returned.
        length_bonus: Added per emitted label.

    Returns:
        Finished hypotheses ranked by fused score, ties by token sequence.
        An empty CTC matrix gives an empty list with empty_result set.

    Raises:
        ContractViolation: If beam_size < 1.
    """
    if beam_size < 1:
        raise ContractViolation(f"beam_size must be >= 1, got {beam_size}")
    if scorer.ctc_logprobs.shape[0] == 0:
        logger.warning("Empty encoder output; nothing to decode")
        return NBestList(empty_result=True)

    def score(h: Hypothesis) -> float:
        return fused_score_ctc_ar(h, weights) + length_bonus * len(h.tokens)

    limit = _label_limit(scorer, max_len)
    tokens = real_token_ids(scorer.vocab_size)
    live = [Hypothesis(tokens=(), ctc_state=ctc_initial_state(scorer.ctc_logprobs))]
    finished: list[Hypothesis] = []

    step = 0
    while live:
        expansions = _expand(live, scorer, tokens, allow_tokens=step < limit)
        expansions.sort(key=lambda h: rank_key(score(h), h))
        kept = expansions[:beam_size]
        finished.extend(h for h in kept if h.ended)
        live = [h for h in kept if not h.ended]
        logger.debug(f"step {step}: {len(expansions)} expansions, {len(live)} live, {len(finished)} finished")
        step += 1

    finished.sort(key=lambda h: rank_key(score(h), h))
    return NBestList(hypotheses=[to_scored(h, score(h)) for h in finished[:nbest]])


def greedy_search_ctc_ar(
    scorer: DecoderScorer,
    weights: FusionWeights,
    max_len: Optional[int] = None,
    length_bonus: float = 0.0,
) -> NBestList:
    """
    Fused greedy decoding: keep the single best expansion each step.

    Gives the same output as beam_search_ctc_ar with beam_size=1.
    """
    if scorer.ctc_logprobs.shape[0] == 0:
        logger.warning("Empty encoder output; nothing to decode")
        return NBestList(empty_result=True)

    def score(h: Hypothesis) -> float:
        return fused_score_ctc_ar(h, weights) + length_bonus * len(h.tokens)

    limit = _label_limit(scorer, max_len)
    tokens = real_token_ids(scorer.vocab_size)
    current = Hypothesis(tokens=(), ctc_state=ctc_initial_state(scorer.ctc_logprobs))
    while not current.ended:
        expansions = _expand([current], scorer, tokens, allow_tokens=len(current.tokens) < limit)
        current = min(expansions, key=lambda h: rank_key(score(h), h))
    return NBestList(hypotheses=[to_scored(current, score(current))])
