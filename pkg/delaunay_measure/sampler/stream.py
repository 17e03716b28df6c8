from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Iterator, Union

from common.utils.logging_setup import setup_logger

logger = setup_logger(__name__)


class SampleStream:
    """
    A JSON-lines file of chain samples, one configuration per line.

    Each record goes out as a single write of one complete line under a
    lock, so several chains can share a stream and a reader never sees half
    a record from this process. An interrupted run leaves at most one torn
    last line, which read() skips.
    """

    def __init__(self, path: Union[str, Path]) -> None:
        self._path = Path(path)
        self._lock = threading.Lock()

    @property
    def path(self) -> Path:
        return self._path

    def reset(self) -> None:
        """Start an empty stream, creating parent directories."""
        with self._lock:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._path.write_text("", encoding="utf-8")

    def append(self, record: dict) -> None:
        line = json.dumps(record, separators=(",", ":")) + "\n"
        with self._lock:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            with self._path.open("a", encoding="utf-8") as handle:
                handle.write(line)
                handle.flush()

    def __iter__(self) -> Iterator[dict]:
        return iter(self.read())

    def read(self) -> list[dict]:
        """Every parseable record; malformed or torn lines are skipped with a warning."""
        with self._lock:
            if not self._path.exists():
                return []
            try:
                lines = self._path.read_text(encoding="utf-8").splitlines()
            except OSError as exc:
                logger.warning("Sample stream read failed: %s", exc)
                return []

        records: list[dict] = []
        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                logger.warning("Skipping malformed sample on line %d: %s", number, exc)
        return records
