"""
The three output branches: CTC head, causal AR decoder and block-masked AMD decoder.
"""

from typing import Sequence

import numpy as np

from exceptions import ContractViolation, EmptyInputError
from model.encoder import EncoderOutput
from model.layers import decoder_layer, linear, norm
from model.masks import build_block_mask, build_causal_mask
from model.params import AMD_DECODER, AR_DECODER, CTC_HEAD, POSITIONS, ModelParams
from model.vocab import SOS_EOS_ID
from tensor_core import Tensor, add, embedding, index, log_softmax, multiply


def ctc_head(enc: EncoderOutput, params: ModelParams) -> Tensor:
    """(T', vocab_size) CTC log-probabilities; every row is normalised."""
    return log_softmax(linear(enc.frames, params, f"{CTC_HEAD}.out"))


def _check_tokens(tokens: np.ndarray, params: ModelParams) -> None:
    if tokens.shape[-1] == 0:
        raise EmptyInputError("decoder input must contain at least one token")
    if tokens.shape[-1] > params.config.max_len:
        raise ContractViolation(
            f"decoder input of length {tokens.shape[-1]} exceeds max_len {params.config.max_len}"
        )


def _decoder_stack(
    branch: str,
    tokens: np.ndarray,
    keep: np.ndarray | None,
    self_mask: np.ndarray,
    enc: EncoderOutput,
    params: ModelParams,
) -> Tensor:
    """
    Shared decoder body.

    Token embeddings are multiplied by `keep` (zeroing concealed slots) before
    the position table is added, so concealed slots still know where they are.
    """
    prefix = params.branch_prefix(branch)
    length = tokens.shape[-1]
    x = embedding(params[f"{prefix}.embed"], tokens)
    if keep is not None:
        x = multiply(x, Tensor(np.broadcast_to(keep[..., None], x.shape).copy()))
    x = add(x, index(params[POSITIONS], slice(0, length)))
    for i in range(params.config.n_decoder_layers):
        x = decoder_layer(x, enc.frames, params, f"{prefix}.layers.{i}", self_mask)
    x = norm(x, params, f"{prefix}.final_ln")
    return log_softmax(linear(x, params, f"{prefix}.out"))


def ar_decoder_forward_batch(tokens: np.ndarray, enc: EncoderOutput, params: ModelParams) -> Tensor:
    """
    Causal decoding of N equal-length sequences at once.

    Args:
        tokens: (N, L) ids, each row starting with sos.
        enc: Encoder output shared by all rows.
        params: Model parameters.

    Returns:
        (N, L, vocab_size) log-probabilities; row j of a sequence only depends
        on its tokens 1..j.
    """
    tokens = np.asarray(tokens, dtype=np.int64)
    _check_tokens(tokens, params)
    if np.any(tokens[..., 0] != SOS_EOS_ID):
        raise ContractViolation("AR decoder input must begin with sos")
    mask = build_causal_mask(tokens.shape[-1]).additive()
    return _decoder_stack(AR_DECODER, tokens, None, mask, enc, params)


def ar_decoder_forward(tokens: Sequence[int], enc: EncoderOutput, params: ModelParams) -> Tensor:
    """(L, vocab_size) AR log-probabilities for a single sos-prefixed sequence."""
    tokens = np.asarray(tokens, dtype=np.int64)
    return ar_decoder_forward_batch(tokens[None, :], enc, params)[0]


def amd_decoder_logprobs(
    tokens: np.ndarray,
    blocks: Sequence[tuple[int, int]],
    enc: EncoderOutput,
    params: ModelParams,
) -> Tensor:
    """
    Run the AMD decoder over N inputs, each concealing its own block.

    Args:
        tokens: (N, L) ids; values at concealed slots are ignored.
        blocks: N (start, end) pairs, 1-based inclusive.
        enc: Encoder output shared by all rows.
        params: Model parameters.

    Returns:
        (N, L, vocab_size) log-probabilities. Only the rows inside each
        entry's block are predictions; they never depend on the ids stored
        in that block.
    """
    tokens = np.asarray(tokens, dtype=np.int64)
    if tokens.ndim != 2 or len(blocks) != tokens.shape[0]:
        raise ContractViolation(
            f"AMD decoder: shape mismatch tokens {tokens.shape} vs {len(blocks)} blocks"
        )
    _check_tokens(tokens, params)
    length = tokens.shape[1]
    masks = np.stack([build_block_mask(length, s, e).additive() for s, e in blocks])
    keep = np.ones(tokens.shape)
    for n, (s, e) in enumerate(blocks):
        keep[n, s - 1:e] = 0.0
    return _decoder_stack(AMD_DECODER, tokens, keep, masks[:, None, :, :], enc, params)


def amd_decoder_forward(
    tokens: Sequence[int],
    block_start: int,
    block_end: int,
    enc: EncoderOutput,
    params: ModelParams,
) -> Tensor:
    """
    Predict every slot of one concealed block in parallel.

    Args:
        tokens: Length-L label sequence (no sos/eos).
        block_start: First concealed slot, 1-based.
        block_end: Last concealed slot, inclusive.
        enc: Encoder output.
        params: Model parameters.

    Returns:
        (block_end - block_start + 1, vocab_size) log-probabilities.

    Raises:
        ContractViolation: If the block lies outside [1, L].
    """
    tokens = np.asarray(tokens, dtype=np.int64)
    rows = amd_decoder_logprobs(tokens[None, :], [(block_start, block_end)], enc, params)
    return index(rows, (0, slice(block_start - 1, block_end)))
