"""
CTC training loss via log-space forward-backward.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from exceptions import ContractViolation, EmptyInputError
from model.vocab import BLANK_ID
from tensor_core import Tensor, as_tensor
from tensor_core.tensor import make_node

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CTCLossResult:
    """
    Attributes:
        loss: Scalar tensor holding -log P(target | x); +inf when infeasible.
        feasible: False when the target cannot be emitted in the available frames.
    """

    loss: Tensor
    feasible: bool

    def value(self) -> float:
        return self.loss.item()


def ctc_min_frames(target: Sequence[int]) -> int:
    """Fewest frames able to emit `target`: one per label plus a blank between repeats."""
    repeats = sum(1 for a, b in zip(target, target[1:]) if a == b)
    return len(target) + repeats


def _check_logprobs(lp: np.ndarray) -> None:
    if lp.ndim != 2:
        raise ContractViolation(f"CTC expects a (T, V) matrix, got shape {lp.shape}")
    if lp.shape[0] == 0:
        raise EmptyInputError("CTC needs at least one frame")


def _expand_with_blanks(target: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """
    Blank-interleaved label sequence l' of length 2L+1, and the mask of
    positions s that may be reached directly from s-2.
    """
    ext = np.full(2 * len(target) + 1, BLANK_ID, dtype=np.int64)
    ext[1::2] = target
    skip = np.zeros(len(ext), dtype=bool)
    skip[2:] = (ext[2:] != BLANK_ID) & (ext[2:] != ext[:-2])
    return ext, skip


def _shift(values: np.ndarray, k: int) -> np.ndarray:
    """values moved k slots to the right along the last axis, -inf filled."""
    out = np.full_like(values, -np.inf)
    if k < values.shape[-1]:
        out[..., k:] = values[..., : values.shape[-1] - k]
    return out


def _forward_backward(lp: np.ndarray, ext: np.ndarray, skip: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Log-space alpha and beta tables, both (T, S) and both including the
    emission at their own frame.
    """
    t_max, s_max = lp.shape[0], len(ext)
    emit = lp[:, ext]
    alpha = np.full((t_max, s_max), -np.inf)
    beta = np.full((t_max, s_max), -np.inf)

    alpha[0, 0] = emit[0, 0]
    if s_max > 1:
        alpha[0, 1] = emit[0, 1]
    for t in range(1, t_max):
        prev = alpha[t - 1]
        stay_or_step = np.logaddexp(prev, _shift(prev, 1))
        jump = np.where(skip, _shift(prev, 2), -np.inf)
        alpha[t] = np.logaddexp(stay_or_step, jump) + emit[t]

    beta[-1, -1] = emit[-1, -1]
    if s_max > 1:
        beta[-1, -2] = emit[-1, -2]
    skip_from = np.zeros(s_max, dtype=bool)
    skip_from[:-2] = skip[2:]
    for t in range(t_max - 2, -1, -1):
        nxt = beta[t + 1]
        stay_or_step = np.logaddexp(nxt, _shift(nxt[::-1], 1)[::-1])
        jump = np.where(skip_from, _shift(nxt[::-1], 2)[::-1], -np.inf)
        beta[t] = np.logaddexp(stay_or_step, jump) + emit[t]
    return alpha, beta


def ctc_loss(logprobs, target: Sequence[int]) -> CTCLossResult:
    """
    Negative log-likelihood of `target` under a CTC output matrix.

    Sums over every alignment path with the forward-backward recursion in
    log space. The result is a graph node, so gradients flow back into
    `logprobs` (d loss / d logprobs[t, k] is minus the posterior occupancy
    of label k at frame t).

    Args:
        logprobs: (T, V) log-probabilities, a Tensor or an array.
        target: Label ids, none of them blank.

    Returns:
        CTCLossResult. An infeasible target (fewer frames than
        ctc_min_frames) gives loss +inf, feasible=False and zero gradient.

    Raises:
        ContractViolation: If the target contains a blank or an id outside [0, V).
        EmptyInputError: If there are no frames.
    """
    logprobs = as_tensor(logprobs)
    lp = logprobs.data
    _check_logprobs(lp)
    target = [int(y) for y in target]
    vocab = lp.shape[1]
    if any(y == BLANK_ID for y in target):
        raise ContractViolation("CTC target must not contain the blank id")
    if any(not 0 <= y < vocab for y in target):
        raise ContractViolation(f"CTC target ids must lie in [0, {vocab})")

    if lp.shape[0] < ctc_min_frames(target):
        logger.debug(f"Infeasible CTC target: {len(target)} labels in {lp.shape[0]} frames")
        node = make_node(np.array(np.inf), (logprobs,), lambda g: (np.zeros_like(lp),), "ctc_loss")
        return CTCLossResult(loss=node, feasible=False)

    ext, skip = _expand_with_blanks(target)
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha, beta = _forward_backward(lp, ext, skip)
        if len(ext) > 1:
            log_total = np.logaddexp(alpha[-1, -1], alpha[-1, -2])
        else:
            log_total = alpha[-1, -1]

    def grad_fn(g):
        with np.errstate(divide="ignore", invalid="ignore"):
            occupancy = np.exp(alpha + beta - lp[:, ext] - log_total)
        occupancy = np.nan_to_num(occupancy, nan=0.0)
        grad = np.zeros_like(lp)
        np.add.at(grad, (slice(None), ext), occupancy)
        return (-g * grad,)

    node = make_node(np.array(-log_total), (logprobs,), grad_fn, "ctc_loss")
    return CTCLossResult(loss=node, feasible=True)
