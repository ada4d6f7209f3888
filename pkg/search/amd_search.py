"""
Tripartite CTC + AMD + AR beam search over a block schedule.

The CTC greedy output c, capped at the decoder limit, fixes the sentence
length L and supplies the right context of every block. For each block the
AMD decoder predicts all concealed slots of every beam member in one batched
call; the slots are then committed left to right with in-block pruning, and
the surviving hypotheses are re-ranked with the AR score once the block is
complete.
"""

import logging
from typing import Sequence, Union

import numpy as np

from ctc.greedy import ctc_greedy
from ctc.prefix_score import ctc_initial_state, ctc_prefix_extend_many, ctc_sequence_logprob
from exceptions import ContractViolation
from model.vocab import FIRST_TOKEN_ID, MASK_ID
from schemas.decode_schema import FusionWeights, NBestList, SchedulePlan
from search.hypothesis import (
    Hypothesis,
    in_block_score,
    rank_key,
    to_scored,
    tripartite_score,
    weighted_sum,
)
from search.schedule import BlockSchedule, make_schedule
from search.scorers import DecoderScorer

logger = logging.getLogger(__name__)


def slot_candidates(row: np.ndarray, ctc_token: int, k_amd: int) -> list[int]:
    """
    Tokens tried at one slot: the k_amd best real tokens of the AMD row plus
    the CTC 1-best token of that slot.

    Ties among AMD scores go to the lower id. The result is sorted by id.
    """
    real = row[FIRST_TOKEN_ID:]
    order = np.lexsort((np.arange(len(real)), -real))
    chosen = {int(i) + FIRST_TOKEN_ID for i in order[:k_amd]}
    chosen.add(int(ctc_token))
    return sorted(chosen)


def _block_inputs(beam: Sequence[Hypothesis], c: Sequence[int], start: int, end: int) -> np.ndarray:
    """Committed left context, mask ids over the block, CTC hypothesis to the right."""
    length = len(c)
    inputs = np.empty((len(beam), length), dtype=np.int64)
    for n, h in enumerate(beam):
        inputs[n, : start - 1] = h.tokens
        inputs[n, start - 1:end] = MASK_ID
        inputs[n, end:] = c[end:]
    return inputs


def _with_ar_scores(hyps: list[Hypothesis], scorer: DecoderScorer) -> list[Hypothesis]:
    """Recompute alpha_AR of every hypothesis with one batched causal forward."""
    if not hyps:
        return hyps
    prefixes = np.array([h.tokens for h in hyps], dtype=np.int64)
    rows = scorer.ar_rows(prefixes)
    positions = np.arange(prefixes.shape[1])
    out = []
    for n, h in enumerate(hyps):
        alpha_ar = float(rows[n, positions, prefixes[n]].sum())
        out.append(Hypothesis(h.tokens, h.alpha_ctc, alpha_ar, h.alpha_amd, h.ctc_state))
    return out


def _resolve_schedule(schedule: Union[BlockSchedule, SchedulePlan], length: int) -> BlockSchedule:
    if isinstance(schedule, SchedulePlan):
        return make_schedule(length, schedule)
    schedule.validate(length)
    return schedule


def beam_search_amd(
    scorer: DecoderScorer,
    schedule: Union[BlockSchedule, SchedulePlan],
    k_amd: int,
    k_main: int,
    weights: FusionWeights,
    ar_per_slot: bool = False,
    nbest: int = 100,
) -> NBestList:
    """
    Decode with the block-based attention mask decoder.

    Args:
        scorer: Model (or table) to score with.
        schedule: A plan, instantiated for L = |ctc_greedy|, or a ready schedule
            that must partition [1, L].
        k_amd: Candidates per slot and partials kept per source hypothesis.
        k_main: Hypotheses kept after each block.
        weights: lambda_ctc and lambda_amd rank in-block partials; lambda_ar joins
            for the post-block re-rank. lambda_ar = 0 skips every AR forward, and a
            block left with a single survivor skips its re-rank.
        ar_per_slot: Score AR after every slot and prune in-block with the full
            tripartite score.
        nbest: Hypotheses returned.

    Returns:
        The last re-ranked candidate list (before the k_main cut), best first;
        every hypothesis has exactly L tokens. A CTC hypothesis longer than
        scorer.max_len - 1 is truncated to that length first, the label cap the
        CTC+AR search uses. An empty CTC hypothesis yields the single empty
        hypothesis.

    Raises:
        ContractViolation: If k_amd or k_main is below 1 or a ready schedule does
            not partition [1, L].
    """
    if k_amd < 1 or k_main < 1:
        raise ContractViolation(f"K_AMD and K_main must be >= 1, got {k_amd}, {k_main}")
    lp = scorer.ctc_logprobs
    if lp.shape[0] == 0:
        logger.warning("Empty encoder output; nothing to decode")
        return NBestList(empty_result=True)

    c = ctc_greedy(lp)
    limit = scorer.max_len - 1
    if len(c) > limit:
        logger.warning(f"CTC greedy hypothesis has {len(c)} tokens; truncating to the decoder limit {limit}")
        c = c[:limit]
    initial = Hypothesis(tokens=(), ctc_state=ctc_initial_state(lp))
    if not c:
        logger.warning("CTC greedy hypothesis is empty; returning the empty hypothesis")
        empty = Hypothesis(tokens=(), alpha_ctc=ctc_sequence_logprob(initial.ctc_state))
        return NBestList(hypotheses=[to_scored(empty, weighted_sum([(weights.lambda_ctc, empty.alpha_ctc)]))])

    blocks = _resolve_schedule(schedule, len(c))
    use_ar = weights.lambda_ar != 0.0
    beam = [initial]
    ranked: list[Hypothesis] = beam
    ar_pending = False
    for start, end in blocks.blocks:
        rows = scorer.amd_rows(_block_inputs(beam, c, start, end), (start, end))
        sources = [[h] for h in beam]
        for j in range(start, end + 1):
            for n, partials in enumerate(sources):
                row = rows[n, j - start]
                extended = []
                for h in partials:
                    cands = slot_candidates(row, c[j - 1], k_amd)
                    states, psis = ctc_prefix_extend_many(h.ctc_state, cands, lp)
                    for k, token in enumerate(cands):
                        extended.append(
                            Hypothesis(
                                tokens=h.tokens + (token,),
                                alpha_ctc=float(psis[k]),
                                alpha_ar=h.alpha_ar,
                                alpha_amd=h.alpha_amd + float(row[token]),
                                ctc_state=states[k],
                            )
                        )
                if ar_per_slot and use_ar:
                    extended = _with_ar_scores(extended, scorer)
                    key = tripartite_score
                else:
                    key = in_block_score
                extended.sort(key=lambda h: rank_key(key(h, weights), h))
                sources[n] = extended[:k_amd]

        survivors = [h for partials in sources for h in partials]
        if use_ar and not ar_per_slot:
            # a lone survivor needs no re-rank; its AR score is filled in at the end
            ar_pending = len(survivors) == 1
            if not ar_pending:
                survivors = _with_ar_scores(survivors, scorer)
        ranked = sorted(survivors, key=lambda h: rank_key(tripartite_score(h, weights), h))
        beam = ranked[:k_main]
        logger.debug(f"block [{start}, {end}]: {len(survivors)} survivors, beam {len(beam)}")

    if ar_pending:
        ranked = _with_ar_scores(ranked, scorer)
    return NBestList(hypotheses=[to_scored(h, tripartite_score(h, weights)) for h in ranked[:nbest]])
