"""
Incremental CTC prefix scoring for label-synchronous beam search.

A prefix state keeps two per-frame log-probability vectors: the mass of
alignment paths that have emitted exactly the prefix by frame t and end in a
non-blank (r_n) or in a blank (r_b). Extending by one label runs one pass over
the frames and also yields the prefix probability psi: the total mass of all
complete label sequences that start with the extended prefix.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ctc.loss import _check_logprobs
from exceptions import ContractViolation
from model.vocab import BLANK_ID
from tensor_core import as_tensor


@dataclass(frozen=True)
class CTCPrefixState:
    """
    Immutable prefix-scorer state; forking a beam shares it safely.

    Attributes:
        prefix: Labels emitted so far.
        log_nonblank: (T,) r_n, paths for the prefix ending in a non-blank at frame t.
        log_blank: (T,) r_b, paths for the prefix ending in a blank at frame t.
        score: alpha_CTC of the prefix (0 for the empty prefix).
        frame_cursor: First frame the last extension recursed over.
    """

    prefix: tuple[int, ...]
    log_nonblank: np.ndarray
    log_blank: np.ndarray
    score: float
    frame_cursor: int

    def __post_init__(self):
        self.log_nonblank.setflags(write=False)
        self.log_blank.setflags(write=False)

    @property
    def emission_logprob(self) -> float:
        """Mass of paths that have emitted exactly the prefix by the last frame."""
        return float(np.logaddexp(self.log_nonblank[-1], self.log_blank[-1]))


def _as_matrix(logprobs) -> np.ndarray:
    lp = as_tensor(logprobs).data
    _check_logprobs(lp)
    return lp


def ctc_initial_state(logprobs) -> CTCPrefixState:
    """State of the empty prefix: only blanks so far, alpha_CTC = 0."""
    lp = _as_matrix(logprobs)
    return CTCPrefixState(
        prefix=(),
        log_nonblank=np.full(lp.shape[0], -np.inf),
        log_blank=np.cumsum(lp[:, BLANK_ID]),
        score=0.0,
        frame_cursor=0,
    )


def ctc_prefix_extend_many(
    state: CTCPrefixState,
    tokens: Sequence[int],
    logprobs,
) -> tuple[list[CTCPrefixState], np.ndarray]:
    """
    Extend one prefix with several candidate labels at once.

    Args:
        state: Current prefix state.
        tokens: Candidate labels, none of them blank.
        logprobs: (T, V) CTC log-probabilities the state was built from.

    Returns:
        (new states, alpha_CTC per candidate), in candidate order.

    Raises:
        ContractViolation: If a candidate is blank or outside the vocabulary.
    """
    lp = _as_matrix(logprobs)
    t_max, vocab = lp.shape
    tokens = np.asarray(tokens, dtype=np.int64)
    if tokens.size == 0:
        return [], np.zeros(0)
    if np.any(tokens == BLANK_ID) or np.any((tokens < 0) | (tokens >= vocab)):
        raise ContractViolation(f"prefix extension needs non-blank ids in [1, {vocab})")

    count = len(tokens)
    emitted = lp[:, tokens]
    r_n = np.full((t_max, count), -np.inf)
    r_b = np.full((t_max, count), -np.inf)
    if not state.prefix:
        r_n[0] = emitted[0]

    r_sum = np.logaddexp(state.log_nonblank, state.log_blank)
    phi = np.repeat(r_sum[:, None], count, axis=1)
    if state.prefix:
        repeat = tokens == state.prefix[-1]
        phi[:, repeat] = state.log_blank[:, None]

    start = max(1, len(state.prefix))
    psi = r_n[start - 1].copy() if start - 1 < t_max else np.full(count, -np.inf)
    for t in range(start, t_max):
        r_n[t] = np.logaddexp(r_n[t - 1], phi[t - 1]) + emitted[t]
        r_b[t] = np.logaddexp(r_n[t - 1], r_b[t - 1]) + lp[t, BLANK_ID]
        psi = np.logaddexp(psi, phi[t - 1] + emitted[t])

    states = [
        CTCPrefixState(
            prefix=state.prefix + (int(token),),
            log_nonblank=r_n[:, k].copy(),
            log_blank=r_b[:, k].copy(),
            score=float(psi[k]),
            frame_cursor=start,
        )
        for k, token in enumerate(tokens.tolist())
    ]
    return states, psi


def ctc_prefix_extend(state: CTCPrefixState, token: int, logprobs) -> tuple[CTCPrefixState, float]:
    """
    Extend a prefix by one label.

    Args:
        state: Current prefix state.
        token: Non-blank label.
        logprobs: (T, V) CTC log-probabilities.

    Returns:
        (new state, alpha_CTC) where alpha_CTC is the log mass of every complete
        label sequence beginning with the extended prefix; -inf when the prefix
        cannot be emitted in T frames.
    """
    states, scores = ctc_prefix_extend_many(state, [token], logprobs)
    return states[0], float(scores[0])


def ctc_sequence_logprob(state: CTCPrefixState) -> float:
    """Log-probability that the complete label sequence is exactly the prefix."""
    return state.emission_logprob
