"""
Exact CTC machinery: training loss, greedy decoding and prefix scoring.

Blank is id 0 everywhere and all accumulation happens in log space.
"""

from ctc.loss import CTCLossResult, ctc_loss, ctc_min_frames
from ctc.greedy import ctc_greedy
from ctc.prefix_score import (
    CTCPrefixState,
    ctc_initial_state,
    ctc_prefix_extend,
    ctc_prefix_extend_many,
    ctc_sequence_logprob,
)

__all__ = [
    # Loss
    "CTCLossResult",
    "ctc_loss",
    "ctc_min_frames",
    # Decoding
    "ctc_greedy",
    # Prefix scoring
    "CTCPrefixState",
    "ctc_initial_state",
    "ctc_prefix_extend",
    "ctc_prefix_extend_many",
    "ctc_sequence_logprob",
]
