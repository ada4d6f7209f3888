"""
Training losses of the tripartite model.

L = gamma_ctc * L_CTC + gamma_ar * L_AR + gamma_amd * L_AMD per utterance,
averaged over the batch. L_AMD marginalises over randomly sampled block sizes:
for each sampled B the sentence is tiled into blocks of width B from slot 1
and every block is concealed in turn.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ctc.loss import ctc_loss
from exceptions import ContractViolation, EmptyInputError
from model.decoders import amd_decoder_logprobs, ar_decoder_forward, ctc_head
from model.encoder import EncoderOutput, encoder_forward
from model.params import ModelParams
from model.vocab import SOS_EOS_ID
from schemas.corpus_schema import Utterance
from schemas.train_schema import LossWeights
from search.schedule import tile_blocks
from tensor_core import Tensor, add, index, reduce_sum, scale

logger = logging.getLogger(__name__)


def sample_block_sizes(length: int, n: int, rng: np.random.Generator) -> list[int]:
    """
    Draw n block sizes uniformly from [1, length].

    Raises:
        ContractViolation: If length < 1.
    """
    if length < 1:
        raise ContractViolation(f"block sizes need length >= 1, got {length}")
    return [int(b) for b in rng.integers(1, length + 1, size=n)]


def _nll(logprobs: Tensor, key) -> Tensor:
    return scale(reduce_sum(index(logprobs, key)), -1.0)


def ar_loss(params: ModelParams, enc: EncoderOutput, target: Sequence[int]) -> Tensor:
    """
    Label-shifted cross-entropy: input sos + y, targets y + eos, summed over positions.
    """
    target = [int(y) for y in target]
    inputs = [SOS_EOS_ID] + target
    outputs = np.array(target + [SOS_EOS_ID], dtype=np.int64)
    logprobs = ar_decoder_forward(inputs, enc, params)
    return _nll(logprobs, (np.arange(len(outputs)), outputs))


def amd_loss(
    params: ModelParams,
    enc: EncoderOutput,
    target: Sequence[int],
    block_sizes: Sequence[int],
) -> Tensor:
    """
    Sum over sampled block sizes of the per-token AMD negative log-likelihood.

    Each block size costs one batched decoder call covering all of its blocks;
    every slot is predicted exactly once per block size, with ground truth
    everywhere outside its block.

    Args:
        params: Model parameters.
        enc: Encoder output of the utterance.
        target: Label ids (no sos/eos).
        block_sizes: Sampled widths, each in [1, |target|].

    Returns:
        Scalar loss tensor.

    Raises:
        EmptyInputError: If the target is empty.
    """
    target = np.asarray(target, dtype=np.int64)
    length = len(target)
    if length == 0:
        raise EmptyInputError("AMD loss needs a non-empty target")
    total = None
    for block_size in block_sizes:
        blocks = tile_blocks(length, int(block_size))
        tokens = np.tile(target, (len(blocks), 1))
        logprobs = amd_decoder_logprobs(tokens, blocks, enc, params)
        owner = np.concatenate([np.full(e - s + 1, n) for n, (s, e) in enumerate(blocks)])
        term = _nll(logprobs, (owner, np.arange(length), target))
        total = term if total is None else add(total, term)
    return total


@dataclass(frozen=True)
class LossBreakdown:
    """
    Loss of one utterance.

    Attributes:
        total: Weighted sum as a graph node.
        ctc: CTC loss value (0 when skipped or unweighted).
        ar: AR loss value (0 when unweighted).
        amd: AMD loss value (0 when unweighted).
        ctc_skipped: The CTC target was infeasible and left out.
    """

    total: Tensor
    ctc: float
    ar: float
    amd: float
    ctc_skipped: bool = False


def compute_losses(
    params: ModelParams,
    features: np.ndarray,
    target: Sequence[int],
    weights: LossWeights,
    block_sizes: Sequence[int],
) -> LossBreakdown:
    """
    Weighted tripartite loss of one utterance.

    Components with zero weight are not computed. An infeasible CTC target
    drops the CTC term.
    """
    enc = encoder_forward(features, params)
    terms: list[Tensor] = []
    values = {"ctc": 0.0, "ar": 0.0, "amd": 0.0}
    skipped = False

    if weights.gamma_ctc > 0:
        result = ctc_loss(ctc_head(enc, params), target)
        if result.feasible:
            terms.append(scale(result.loss, weights.gamma_ctc))
            values["ctc"] = result.value()
        else:
            skipped = True
    if weights.gamma_ar > 0:
        loss = ar_loss(params, enc, target)
        terms.append(scale(loss, weights.gamma_ar))
        values["ar"] = loss.item()
    if weights.gamma_amd > 0:
        loss = amd_loss(params, enc, target, block_sizes)
        terms.append(scale(loss, weights.gamma_amd))
        values["amd"] = loss.item()

    total = terms[0] if terms else Tensor(np.array(0.0))
    for term in terms[1:]:
        total = add(total, term)
    return LossBreakdown(total=total, ctc_skipped=skipped, **values)


@dataclass(frozen=True)
class BatchLoss:
    """
    Mean loss over a batch plus per-component means for the metrics log.
    """

    total: Tensor
    ctc: float
    ar: float
    amd: float
    skipped_infeasible: int


def batch_loss(
    params: ModelParams,
    batch: Sequence[Utterance],
    weights: LossWeights,
    rng: np.random.Generator,
    n_block_samples: int = 4,
) -> BatchLoss:
    """
    Mean of the per-utterance tripartite losses.

    Block sizes are drawn per utterance, in batch order, from `rng`.

    Raises:
        EmptyInputError: If the batch is empty.
    """
    if not batch:
        raise EmptyInputError("batch_loss needs at least one utterance")
    parts = []
    for utterance in batch:
        sizes = sample_block_sizes(len(utterance.transcript), n_block_samples, rng)
        part = compute_losses(params, utterance.features, utterance.transcript, weights, sizes)
        if part.ctc_skipped:
            logger.warning(
                f"Skipping CTC term of {utterance.id}: {len(utterance.transcript)} labels "
                f"in {-(-utterance.frame_count // params.config.subsample_factor)} frames"
            )
        parts.append(part)

    total = parts[0].total
    for part in parts[1:]:
        total = add(total, part.total)
    count = len(parts)
    return BatchLoss(
        total=scale(total, 1.0 / count),
        ctc=sum(p.ctc for p in parts) / count,
        ar=sum(p.ar for p in parts) / count,
        amd=sum(p.amd for p in parts) / count,
        skipped_infeasible=sum(p.ctc_skipped for p in parts),
    )


def tripartite_loss(
    params: ModelParams,
    batch: Sequence[Utterance],
    weights: LossWeights,
    rng: np.random.Generator,
    n_block_samples: int = 4,
) -> Tensor:
    """gamma_ctc * L_CTC + gamma_ar * L_AR + gamma_amd * L_AMD, averaged over the batch."""
    return batch_loss(params, batch, weights, rng, n_block_samples).total
