"""
UUID generation utilities for deterministic ID creation.

Uses UUID5 (name-based, SHA-1) so the same seed and index always produce the
same ID, which keeps generated corpora byte-identical across runs.

UUID Hierarchy:
    TOOLKIT_NAMESPACE → corpus_id (from the corpus seed) → utterance_id (from split and index)
"""

import hashlib
import json
import uuid
from typing import Any

TOOLKIT_NAMESPACE = uuid.UUID("6f1c3a52-0d4e-5b8a-9c27-4e1f0b6d2a93")


def generate_corpus_id(seed: int) -> str:
    """
    Generate a deterministic corpus UUID from the corpus seed.

    Args:
        seed: Seed of the corpus stream.

    Returns:
        Deterministic UUID5 string for the corpus.
    """
    return str(uuid.uuid5(TOOLKIT_NAMESPACE, f"corpus-{seed}"))


def generate_utterance_id(corpus_id: str, split: str, index: int) -> str:
    """
    Generate a deterministic utterance UUID.

    Args:
        corpus_id: The parent corpus UUID.
        split: Split the utterance belongs to.
        index: Position of the utterance within the whole corpus.

    Returns:
        Deterministic UUID5 string for the utterance.
    """
    namespace = uuid.UUID(corpus_id)
    return str(uuid.uuid5(namespace, f"{split}-{index}"))


def config_hash(config: dict[str, Any]) -> str:
    """sha256 hex digest of the canonical JSON form of a configuration."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def validate_uuid(uuid_string: str) -> bool:
    """
    Validate that a string is a valid UUID.

    Args:
        uuid_string: String to validate.

    Returns:
        True if valid UUID, False otherwise.
    """
    try:
        uuid.UUID(uuid_string)
        return True
    except (ValueError, AttributeError, TypeError):
        return False
