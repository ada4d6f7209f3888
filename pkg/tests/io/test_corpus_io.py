"""Tests for the binary corpus format."""

import struct

import numpy as np
import pytest

from exceptions import FormatError
from schemas.corpus_io import MAGIC, decode_corpus, encode_corpus, load_corpus, save_corpus
from schemas.corpus_schema import CorpusConfig
from synthdata.generator import generate_corpus


class TestRoundTrip:
    """Tests for save_corpus and load_corpus."""

    def test_save_load_save_identical(self, tiny_corpus, tmp_path):
        """Should write the same bytes after a load."""
        first = tmp_path / "a.amdc"
        second = tmp_path / "b.amdc"
        save_corpus(tiny_corpus, first)
        save_corpus(load_corpus(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_values_preserved(self, tiny_corpus, tmp_path):
        """Should restore ids, transcripts and features exactly."""
        path = tmp_path / "corpus.amdc"
        save_corpus(tiny_corpus, path)
        loaded = load_corpus(path)
        assert loaded.config == tiny_corpus.config
        assert loaded.split_sizes() == tiny_corpus.split_sizes()
        for a, b in zip(tiny_corpus.utterances(), loaded.utterances()):
            assert a.id == b.id
            assert a.transcript == b.transcript
            np.testing.assert_array_equal(a.features, b.features)

    def test_empty_corpus(self):
        """Should encode and decode a corpus without utterances."""
        corpus = generate_corpus(CorpusConfig(utterance_count=0))
        assert decode_corpus(encode_corpus(corpus)).total() == 0

    def test_creates_parent_directories(self, tiny_corpus, tmp_path):
        """Should create missing parent directories."""
        path = tmp_path / "nested" / "dir" / "corpus.amdc"
        save_corpus(tiny_corpus, path)
        assert path.exists()


class TestMalformed:
    """Tests for decode_corpus error handling."""

    @pytest.fixture
    def blob(self, tiny_corpus) -> bytes:
        return encode_corpus(tiny_corpus)

    def test_bad_magic(self, blob):
        """Should reject a file with the wrong magic at offset 0."""
        with pytest.raises(FormatError) as exc:
            decode_corpus(b"XXXX" + blob[4:])
        assert exc.value.offset == 0

    @pytest.mark.parametrize("cut", [2, 6, 20, 200, -1])
    def test_truncated(self, blob, cut):
        """Should report truncation anywhere in the file."""
        with pytest.raises(FormatError):
            decode_corpus(blob[:cut])

    def test_truncation_offset(self, blob):
        """Should point at the last complete position before the cut."""
        with pytest.raises(FormatError) as exc:
            decode_corpus(blob[:-1])
        assert 0 < exc.value.offset < len(blob)

    def test_trailing_bytes(self, blob):
        """Should reject bytes after the last record."""
        with pytest.raises(FormatError, match="trailing"):
            decode_corpus(blob + b"\x00")

    def test_malformed_utterance_id(self, tiny_corpus, blob):
        """Should reject an utterance id that is not a UUID at the start of its record."""
        utt_id = tiny_corpus.train[0].id.encode("utf-8")
        position = blob.index(utt_id)
        bad = blob[:position] + b"x" * len(utt_id) + blob[position + len(utt_id):]
        with pytest.raises(FormatError, match="not a UUID") as exc:
            decode_corpus(bad)
        assert exc.value.offset == position - 2

    def test_unreadable_header(self):
        """Should reject a header that is not JSON."""
        bad = MAGIC + struct.pack("<I", 3) + b"{{{"
        with pytest.raises(FormatError) as exc:
            decode_corpus(bad)
        assert exc.value.offset == 8

    def test_missing_file(self, tmp_path):
        """Should raise FileNotFoundError for a missing file."""
        with pytest.raises(FileNotFoundError):
            load_corpus(tmp_path / "missing.amdc")

    def test_no_partial_corpus(self, blob, tmp_path):
        """Should not return anything for a file truncated mid-record."""
        path = tmp_path / "cut.amdc"
        path.write_bytes(blob[: len(blob) // 2])
        result = None
        with pytest.raises(FormatError):
            result = load_corpus(path)
        assert result is None
