"""
Decoding strategies: fused CTC+AR greedy and beam search, and the tripartite
AMD beam search over fixed and mixed block schedules.
"""

from search.schedule import BlockSchedule, count_decoder_calls, make_schedule, tile_blocks
from search.hypothesis import (
    Hypothesis,
    fused_score_ctc_ar,
    in_block_score,
    rank_key,
    to_scored,
    tripartite_score,
)
from search.scorers import DecoderScorer, ModelScorer
from search.ctc_ar_search import beam_search_ctc_ar, greedy_search_ctc_ar
from search.amd_search import beam_search_amd, slot_candidates
from search.decode import ctc_only, decode_split, decode_tokens, decode_utterance, run_system

__all__ = [
    # Schedules
    "BlockSchedule",
    "count_decoder_calls",
    "make_schedule",
    "tile_blocks",
    # Hypotheses and scores
    "Hypothesis",
    "fused_score_ctc_ar",
    "in_block_score",
    "rank_key",
    "to_scored",
    "tripartite_score",
    # Scorers
    "DecoderScorer",
    "ModelScorer",
    # Searches
    "beam_search_ctc_ar",
    "greedy_search_ctc_ar",
    "beam_search_amd",
    "slot_candidates",
    # Per-utterance decoding
    "ctc_only",
    "decode_split",
    "decode_tokens",
    "decode_utterance",
    "run_system",
]
