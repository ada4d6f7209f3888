"""
Named random streams derived from one root seed.

Each component draws from its own stream ("corpus", "init", "blocks",
"shuffle"), so changing how much one component consumes never shifts the
numbers another one sees.
"""

import zlib

import numpy as np

CORPUS_STREAM = "corpus"
INIT_STREAM = "init"
BLOCKS_STREAM = "blocks"
SHUFFLE_STREAM = "shuffle"


def named_rng(seed: int, name: str) -> np.random.Generator:
    """
    Generator for the stream `name` under `seed`.

    Args:
        seed: Root seed of the run.
        name: Stream name.

    Returns:
        A fresh numpy Generator; equal (seed, name) pairs give equal streams.
    """
    return np.random.default_rng([seed, zlib.crc32(name.encode("utf-8"))])


def rng_state(rng: np.random.Generator) -> dict:
    """JSON-compatible snapshot of a generator's state."""
    return rng.bit_generator.state


def restore_rng(state: dict) -> np.random.Generator:
    """Rebuild a generator from rng_state output."""
    rng = np.random.default_rng()
    rng.bit_generator.state = state
    return rng
