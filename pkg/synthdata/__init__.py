"""
Synthetic (feature-frame, transcript) corpora for reproducible training and decoding.
"""

from synthdata.generator import generate_corpus, split_sizes, token_prototypes

__all__ = [
    "generate_corpus",
    "split_sizes",
    "token_prototypes",
]
