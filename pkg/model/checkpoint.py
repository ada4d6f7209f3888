"""
"AMD1" checkpoint container.

Layout:
    b"AMD1"
    uint32 little-endian header length
    header: UTF-8 JSON with the config, free-form metadata and a tensor
            directory (name, shape, offset into the payload, value count)
    payload: concatenated little-endian float64 values

The same container stores model weights and resumable training state.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any

import numpy as np

from exceptions import FormatError
from model.params import ModelParams
from schemas.model_config import ModelConfig

logger = logging.getLogger(__name__)

MAGIC = b"AMD1"
_LEN = struct.Struct("<I")
_DTYPE = np.dtype("<f8")


def write_container(
    path: Path,
    kind: str,
    tensors: dict[str, np.ndarray],
    header_extra: dict[str, Any] | None = None,
) -> None:
    """
    Write tensors and a JSON header to an AMD1 file.

    Args:
        path: Destination file; parent directories are created.
        kind: Container kind recorded in the header ("model", "train_state").
        tensors: Name -> array, written in the given order.
        header_extra: Additional JSON-serialisable header fields.
    """
    directory = []
    offset = 0
    for name, array in tensors.items():
        count = int(np.asarray(array).size)
        directory.append({"name": name, "shape": list(np.shape(array)), "offset": offset, "count": count})
        offset += count * _DTYPE.itemsize
    header = {"kind": kind, "tensors": directory, **(header_extra or {})}
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_LEN.pack(len(header_bytes)))
        f.write(header_bytes)
        for array in tensors.values():
            f.write(np.ascontiguousarray(array, dtype=_DTYPE).tobytes())
    logger.debug(f"Wrote {kind} container with {len(tensors)} tensors to {path}")


def read_container(path: Path, expected_kind: str) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    """
    Read an AMD1 file.

    Args:
        path: File to read.
        expected_kind: Kind the header must declare.

    Returns:
        (header, tensors) with tensors in directory order.

    Raises:
        FileNotFoundError: If the file does not exist.
        FormatError: On any structural problem, with the byte offset.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")
    blob = path.read_bytes()

    if blob[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic {blob[:4]!r}, expected {MAGIC!r}", 0)
    if len(blob) < 8:
        raise FormatError(f"{path}: truncated header length", len(blob))
    (header_len,) = _LEN.unpack_from(blob, 4)
    header_end = 8 + header_len
    if len(blob) < header_end:
        raise FormatError(f"{path}: truncated header", len(blob))
    try:
        header = json.loads(blob[8:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: unreadable header ({e})", 8) from e
    if header.get("kind") != expected_kind:
        raise FormatError(f"{path}: container kind {header.get('kind')!r}, expected {expected_kind!r}", 8)

    payload = memoryview(blob)[header_end:]
    tensors: dict[str, np.ndarray] = {}
    end = 0
    for entry in header.get("tensors", []):
        start = entry["offset"]
        stop = start + entry["count"] * _DTYPE.itemsize
        if stop > len(payload):
            raise FormatError(f"{path}: tensor {entry['name']} runs past end of file", header_end + len(payload))
        values = np.frombuffer(payload[start:stop], dtype=_DTYPE).astype(np.float64)
        tensors[entry["name"]] = values.reshape(entry["shape"])
        end = max(end, stop)
    if end != len(payload):
        raise FormatError(f"{path}: {len(payload) - end} trailing bytes after payload", header_end + end)
    return header, tensors


def save_checkpoint(params: ModelParams, path: Path, meta: dict[str, Any] | None = None) -> None:
    """
    Save model weights with their config.

    Args:
        params: Weights to save.
        path: Destination file.
        meta: Optional metadata (epoch, step) stored in the header.
    """
    write_container(
        path,
        "model",
        params.arrays(),
        {"config": params.config.model_dump(), "meta": meta or {}},
    )
    logger.info(f"Checkpoint saved: {path}")


def load_checkpoint(path: Path) -> ModelParams:
    """
    Load model weights; save followed by load reproduces every value bit-exactly.

    Raises:
        FileNotFoundError: If the file does not exist.
        FormatError: If the file is malformed or does not match its config.
    """
    header, tensors = read_container(path, "model")
    config = ModelConfig.model_validate(header["config"])
    try:
        params = ModelParams.from_arrays(config, tensors)
    except ValueError as e:
        raise FormatError(f"{path}: {e}", 8) from e
    logger.info(f"Checkpoint loaded: {path}")
    return params
