"""
Line-delimited JSON files of pydantic records (metrics logs, decode outputs).
"""

import logging
from pathlib import Path
from typing import Iterable, TypeVar

from pydantic import BaseModel

logger = logging.getLogger(__name__)

RecordT = TypeVar("RecordT", bound=BaseModel)


def write_jsonl(records: Iterable[BaseModel], path: Path) -> int:
    """
    Write records, one JSON object per line, replacing the file.

    Returns:
        Number of records written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(record.model_dump_json() + "\n")
            count += 1
    logger.info(f"Wrote {count} records to {path}")
    return count


def append_jsonl(record: BaseModel, path: Path) -> None:
    """Append one record to an append-only log."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as f:
        f.write(record.model_dump_json() + "\n")


def read_jsonl(path: Path, model: type[RecordT]) -> list[RecordT]:
    """
    Load every record of a JSON-lines file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If a line does not validate against `model`.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Records file not found at {path}")
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(model.model_validate_json(line))
            except ValueError as e:
                raise ValueError(f"{path}:{line_number}: invalid {model.__name__} record ({e})") from e
    return records
