"""Unit tests for uuid_generator module."""

import uuid

from utils.uuid_generator import (
    TOOLKIT_NAMESPACE,
    config_hash,
    generate_corpus_id,
    generate_utterance_id,
    validate_uuid,
)

TEST_CORPUS_ID = "550e8400-e29b-41d4-a716-446655440000"


class TestGenerateCorpusId:
    """Tests for generate_corpus_id function."""

    def test_returns_valid_uuid(self):
        """Should return a valid UUID string."""
        assert validate_uuid(generate_corpus_id(7))

    def test_deterministic(self):
        """Should return the same UUID for the same seed."""
        assert generate_corpus_id(7) == generate_corpus_id(7)

    def test_different_seeds(self):
        """Should return different UUIDs for different seeds."""
        assert generate_corpus_id(7) != generate_corpus_id(8)

    def test_uses_uuid5(self):
        """Should be a name-based UUID under the toolkit namespace."""
        result = uuid.UUID(generate_corpus_id(0))
        assert result.version == 5
        assert result == uuid.uuid5(TOOLKIT_NAMESPACE, "corpus-0")


class TestGenerateUtteranceId:
    """Tests for generate_utterance_id function."""

    def test_returns_valid_uuid(self):
        """Should return a valid UUID string."""
        assert validate_uuid(generate_utterance_id(TEST_CORPUS_ID, "train", 0))

    def test_deterministic(self):
        """Should return the same UUID for the same inputs."""
        a = generate_utterance_id(TEST_CORPUS_ID, "dev", 3)
        b = generate_utterance_id(TEST_CORPUS_ID, "dev", 3)
        assert a == b

    def test_split_and_index_matter(self):
        """Should differ across splits, indices and corpora."""
        base = generate_utterance_id(TEST_CORPUS_ID, "train", 1)
        assert base != generate_utterance_id(TEST_CORPUS_ID, "test", 1)
        assert base != generate_utterance_id(TEST_CORPUS_ID, "train", 2)
        assert base != generate_utterance_id(generate_corpus_id(1), "train", 1)


class TestConfigHash:
    """Tests for config_hash function."""

    def test_key_order_irrelevant(self):
        """Should hash equal mappings equally regardless of key order."""
        assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})

    def test_values_matter(self):
        """Should change when a value changes."""
        assert config_hash({"a": 1}) != config_hash({"a": 2})

    def test_hex_digest(self):
        """Should return a 64-character sha256 hex digest."""
        digest = config_hash({})
        assert len(digest) == 64
        int(digest, 16)


class TestValidateUuid:
    """Tests for validate_uuid function."""

    def test_valid_uuid(self):
        """Should return True for valid UUID."""
        assert validate_uuid(TEST_CORPUS_ID) is True

    def test_invalid_uuid(self):
        """Should return False for invalid UUID."""
        assert validate_uuid("not-a-uuid") is False

    def test_empty_string(self):
        """Should return False for empty string."""
        assert validate_uuid("") is False

    def test_none(self):
        """Should return False for None."""
        assert validate_uuid(None) is False
