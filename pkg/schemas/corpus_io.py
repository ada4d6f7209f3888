"""
Binary serialization for Corpus objects.

Layout:
    b"AMDC"
    uint32 little-endian header length
    header: UTF-8 JSON {"config": ..., "splits": {"train": n, "dev": n, "test": n}}
    records, train then dev then test, each:
        uint16 id length, UTF-8 id
        uint32 transcript length, uint32 token ids
        uint32 T, uint32 feature_dim, T * feature_dim little-endian float64 values

All integers are little-endian. Parsing is all-or-nothing: any structural
problem raises FormatError with the byte offset and no partial corpus is
returned.
"""

import json
import logging
import struct
from pathlib import Path

import numpy as np

from exceptions import FormatError
from schemas.corpus_schema import SPLIT_NAMES, Corpus, CorpusConfig, Utterance
from utils.uuid_generator import validate_uuid

logger = logging.getLogger(__name__)

MAGIC = b"AMDC"
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")
_F8 = np.dtype("<f8")
_U4 = np.dtype("<u4")


def encode_corpus(corpus: Corpus) -> bytes:
    """Serialize a corpus to bytes; equal corpora give identical bytes."""
    header = {"config": corpus.config.model_dump(mode="json"), "splits": corpus.split_sizes()}
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    parts = [MAGIC, _U32.pack(len(header_bytes)), header_bytes]
    for utterance in corpus.utterances():
        id_bytes = utterance.id.encode("utf-8")
        features = np.ascontiguousarray(utterance.features, dtype=_F8)
        parts.append(_U16.pack(len(id_bytes)))
        parts.append(id_bytes)
        parts.append(_U32.pack(len(utterance.transcript)))
        parts.append(np.asarray(utterance.transcript, dtype=_U4).tobytes())
        parts.append(_U32.pack(features.shape[0]))
        parts.append(_U32.pack(features.shape[1]))
        parts.append(features.tobytes())
    return b"".join(parts)


class _Reader:
    """Cursor over a byte buffer that reports truncation with its offset."""

    def __init__(self, blob: bytes, source: str):
        self.blob = blob
        self.source = source
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self.blob):
            raise FormatError(f"{self.source}: truncated {what}", self.offset)
        chunk = self.blob[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def u16(self, what: str) -> int:
        return _U16.unpack(self.take(_U16.size, what))[0]

    def u32(self, what: str) -> int:
        return _U32.unpack(self.take(_U32.size, what))[0]


def decode_corpus(blob: bytes, source: str = "<bytes>") -> Corpus:
    """
    Parse bytes produced by encode_corpus.

    Raises:
        FormatError: On bad magic, truncation, an unreadable header, a malformed
            utterance id or trailing bytes.
    """
    reader = _Reader(blob, source)
    magic = reader.take(4, "magic")
    if magic != MAGIC:
        raise FormatError(f"{source}: bad magic {magic!r}, expected {MAGIC!r}", 0)
    header_len = reader.u32("header length")
    header_offset = reader.offset
    try:
        header = json.loads(reader.take(header_len, "header").decode("utf-8"))
        config = CorpusConfig.model_validate(header["config"])
        sizes = {name: int(header["splits"][name]) for name in SPLIT_NAMES}
    except FormatError:
        raise
    except (UnicodeDecodeError, ValueError, KeyError, TypeError) as e:
        raise FormatError(f"{source}: unreadable header ({e})", header_offset) from e

    splits: dict[str, list[Utterance]] = {}
    for name in SPLIT_NAMES:
        records = []
        for _ in range(sizes[name]):
            record_offset = reader.offset
            id_len = reader.u16("utterance id length")
            try:
                utt_id = reader.take(id_len, "utterance id").decode("utf-8")
            except UnicodeDecodeError as e:
                raise FormatError(f"{source}: utterance id is not UTF-8", record_offset) from e
            if not validate_uuid(utt_id):
                raise FormatError(f"{source}: utterance id {utt_id!r} is not a UUID", record_offset)
            n_tokens = reader.u32("transcript length")
            transcript = np.frombuffer(reader.take(n_tokens * _U4.itemsize, "transcript"), dtype=_U4)
            frames = reader.u32("frame count")
            dim = reader.u32("feature width")
            if dim != config.feature_dim:
                raise FormatError(
                    f"{source}: record {utt_id} has feature width {dim}, header says {config.feature_dim}",
                    reader.offset - _U32.size,
                )
            values = np.frombuffer(reader.take(frames * dim * _F8.itemsize, "features"), dtype=_F8)
            records.append(
                Utterance(
                    id=utt_id,
                    transcript=[int(t) for t in transcript],
                    features=values.astype(np.float64).reshape(frames, dim),
                )
            )
        splits[name] = records

    if reader.offset != len(blob):
        raise FormatError(f"{source}: {len(blob) - reader.offset} trailing bytes", reader.offset)
    return Corpus(config=config, **splits)


def save_corpus(corpus: Corpus, path: Path) -> None:
    """
    Write a corpus file, creating parent directories as needed.

    Args:
        corpus: The corpus to save.
        path: Destination file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_corpus(corpus))
    logger.info(f"Corpus saved with {corpus.total()} utterances {corpus.split_sizes()} to {path}")


def load_corpus(path: Path) -> Corpus:
    """
    Read a corpus file.

    Raises:
        FileNotFoundError: If the file does not exist.
        FormatError: If the file is malformed.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Corpus file not found at {path}")
    corpus = decode_corpus(path.read_bytes(), str(path))
    logger.info(f"Loaded corpus from {path} with {corpus.total()} utterances")
    return corpus
