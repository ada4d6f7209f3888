"""
Scorer interface the searches run against.

The searches never touch the network directly: they ask a scorer for CTC
log-probabilities, AR rows for a batch of prefixes, and AMD rows for a batch of
block-concealed inputs. ModelScorer answers from a trained model; tests plug in
small tabular scorers with the same surface.
"""

import logging
from typing import Protocol

import numpy as np

from model.decoders import amd_decoder_logprobs, ar_decoder_forward_batch, ctc_head
from model.encoder import EncoderOutput, encoder_forward
from model.params import ModelParams
from model.vocab import SOS_EOS_ID
from tensor_core import no_grad

logger = logging.getLogger(__name__)


class DecoderScorer(Protocol):
    """
    What a search needs from a model.

    Attributes:
        ctc_logprobs: (T', V) CTC log-probabilities of the utterance.
        vocab_size: V.
        max_len: Longest AR decoder input, sos included.
        amd_calls: AMD invocations so far.
        ar_calls: AR invocations so far.
    """

    ctc_logprobs: np.ndarray
    vocab_size: int
    max_len: int
    amd_calls: int
    ar_calls: int

    def ar_rows(self, prefixes: np.ndarray) -> np.ndarray:
        """
        AR log-probabilities for N label prefixes of equal length i (no sos).

        Returns:
            (N, i + 1, V); row k is the distribution of the label after prefix[:k].
        """
        ...

    def amd_rows(self, inputs: np.ndarray, block: tuple[int, int]) -> np.ndarray:
        """
        AMD log-probabilities for N length-L inputs that all conceal `block`.

        Returns:
            (N, end - start + 1, V), one row per concealed slot.
        """
        ...


class ModelScorer:
    """
    DecoderScorer backed by ModelParams and one encoder output.

    Forwards run under no_grad. Each batched call counts once.
    """

    def __init__(self, params: ModelParams, enc: EncoderOutput):
        self.params = params
        self.enc = enc
        self.vocab_size = params.config.vocab_size
        self.max_len = params.config.max_len
        self.amd_calls = 0
        self.ar_calls = 0
        with no_grad():
            self.ctc_logprobs = ctc_head(enc, params).data

    @classmethod
    def from_features(cls, params: ModelParams, features: np.ndarray) -> "ModelScorer":
        """Encode an utterance and wrap the result."""
        with no_grad():
            enc = encoder_forward(features, params)
        return cls(params, enc)

    def ar_rows(self, prefixes: np.ndarray) -> np.ndarray:
        prefixes = np.asarray(prefixes, dtype=np.int64).reshape(len(prefixes), -1)
        sos = np.full((prefixes.shape[0], 1), SOS_EOS_ID, dtype=np.int64)
        with no_grad():
            rows = ar_decoder_forward_batch(np.concatenate([sos, prefixes], axis=1), self.enc, self.params)
        self.ar_calls += 1
        return rows.data

    def amd_rows(self, inputs: np.ndarray, block: tuple[int, int]) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=np.int64)
        start, end = block
        with no_grad():
            rows = amd_decoder_logprobs(inputs, [block] * inputs.shape[0], self.enc, self.params)
        self.amd_calls += 1
        return rows.data[:, start - 1:end, :]
