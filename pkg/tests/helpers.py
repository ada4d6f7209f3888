"""Test doubles and oracles shared across test modules."""

import itertools
import zlib
from typing import Iterator

import numpy as np

from model.vocab import BLANK_ID


def random_logprobs(rng: np.random.Generator, rows: int, vocab: int) -> np.ndarray:
    """Row-normalised log-probabilities with every entry finite."""
    logits = rng.normal(0.0, 1.5, size=(rows, vocab))
    return logits - np.logaddexp.reduce(logits, axis=1, keepdims=True)


def ctc_matrix_for(best_path: list[int], vocab_size: int, seed: int = 0, margin: float = 3.0) -> np.ndarray:
    """
    CTC log-probabilities whose per-frame argmax follows `best_path`.

    The chosen id gets a logit boost of `margin` over random noise.
    """
    rng = np.random.default_rng(seed)
    logits = rng.normal(0.0, 0.5, size=(len(best_path), vocab_size))
    for t, token in enumerate(best_path):
        logits[t, token] += margin
    return logits - np.logaddexp.reduce(logits, axis=1, keepdims=True)


def collapse(path) -> tuple[int, ...]:
    """CTC collapse: merge repeats, then drop blanks."""
    out = []
    previous = None
    for token in path:
        if token != previous and token != BLANK_ID:
            out.append(int(token))
        previous = token
    return tuple(out)


def label_distribution(logprobs: np.ndarray) -> dict[tuple[int, ...], float]:
    """Exact P(label sequence) by enumerating every alignment path."""
    frames, vocab = logprobs.shape
    probs = np.exp(logprobs)
    totals: dict[tuple[int, ...], float] = {}
    for path in itertools.product(range(vocab), repeat=frames):
        p = float(np.prod(probs[np.arange(frames), path]))
        labels = collapse(path)
        totals[labels] = totals.get(labels, 0.0) + p
    return totals


def prefix_mass(distribution: dict[tuple[int, ...], float], prefix: tuple[int, ...]) -> float:
    """Total probability of the label sequences starting with `prefix`."""
    n = len(prefix)
    return sum(p for labels, p in distribution.items() if labels[:n] == prefix)


def sequences(tokens: list[int], max_len: int) -> Iterator[tuple[int, ...]]:
    """Every sequence over `tokens` of length 0..max_len."""
    for length in range(max_len + 1):
        yield from itertools.product(tokens, repeat=length)


class TableScorer:
    """
    Deterministic DecoderScorer stand-in.

    Every AR row is a pseudo-random distribution keyed by the prefix it
    conditions on; every AMD row is keyed by the whole masked input and the
    slot. Both are reproducible functions of their keys, so exhaustive
    oracles can recompute any score independently.
    """

    def __init__(self, ctc_logprobs: np.ndarray, vocab_size: int, seed: int = 0, max_len: int = 16):
        self.ctc_logprobs = np.asarray(ctc_logprobs, dtype=np.float64)
        self.vocab_size = vocab_size
        self.max_len = max_len
        self.seed = seed
        self.amd_calls = 0
        self.ar_calls = 0

    def _row(self, kind: str, key: tuple[int, ...]) -> np.ndarray:
        digest = zlib.crc32(f"{kind}:{key}".encode("utf-8"))
        rng = np.random.default_rng([self.seed, digest])
        return random_logprobs(rng, 1, self.vocab_size)[0]

    def ar_row(self, prefix) -> np.ndarray:
        """Distribution of the label after `prefix`."""
        return self._row("ar", tuple(int(t) for t in prefix))

    def amd_row(self, inputs, slot: int) -> np.ndarray:
        """Distribution of 1-based `slot` given the masked input sequence."""
        return self._row("amd", tuple(int(t) for t in inputs) + (-slot,))

    def ar_rows(self, prefixes: np.ndarray) -> np.ndarray:
        prefixes = np.asarray(prefixes, dtype=np.int64).reshape(len(prefixes), -1)
        self.ar_calls += 1
        return np.stack(
            [np.stack([self.ar_row(p[:k]) for k in range(p.shape[0] + 1)]) for p in prefixes]
        )

    def amd_rows(self, inputs: np.ndarray, block: tuple[int, int]) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=np.int64)
        start, end = block
        self.amd_calls += 1
        return np.stack(
            [np.stack([self.amd_row(row, j) for j in range(start, end + 1)]) for row in inputs]
        )
