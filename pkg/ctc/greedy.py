"""
Best-path CTC decoding.
"""

import numpy as np

from ctc.loss import _check_logprobs
from model.vocab import BLANK_ID
from tensor_core import as_tensor


def ctc_greedy(logprobs) -> list[int]:
    """
    Per-frame argmax, collapse repeats, then drop blanks.

    Ties go to the lowest token id.

    Args:
        logprobs: (T, V) log-probabilities, a Tensor or an array.

    Returns:
        Label ids of the best path; empty when every frame picks blank.
    """
    lp = as_tensor(logprobs).data
    _check_logprobs(lp)
    best = np.argmax(lp, axis=1)
    labels: list[int] = []
    previous = None
    for token in best.tolist():
        if token != previous and token != BLANK_ID:
            labels.append(token)
        previous = token
    return labels
