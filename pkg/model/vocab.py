"""
Token id conventions.

Id 0 is the CTC blank, id 1 doubles as sos and eos for the AR branch, id 2 is
the mask placeholder (display only, its embedding is never consumed). Real
tokens start at 3.
"""

from typing import Sequence

BLANK_ID = 0
SOS_EOS_ID = 1
MASK_ID = 2
FIRST_TOKEN_ID = 3
NUM_SPECIAL_TOKENS = 3

_SPECIAL_SYMBOLS = {BLANK_ID: "<b>", SOS_EOS_ID: "<s>", MASK_ID: "<msk>"}


def real_token_ids(vocab_size: int) -> list[int]:
    """All ids a transcript may contain."""
    return list(range(FIRST_TOKEN_ID, vocab_size))


def token_symbol(token_id: int) -> str:
    """Printable symbol: a..z for the first 26 real tokens, t<k> beyond."""
    if token_id in _SPECIAL_SYMBOLS:
        return _SPECIAL_SYMBOLS[token_id]
    k = token_id - FIRST_TOKEN_ID
    if 0 <= k < 26:
        return chr(ord("a") + k)
    return f"t{k}"


def render_tokens(tokens: Sequence[int]) -> str:
    """Space-separated symbols for logs and decode records."""
    return " ".join(token_symbol(int(t)) for t in tokens)
