"""Append-only record log backing the survey service.

One JSON document per line. Every append is flushed and fsynced before the
caller gets its acknowledgment, so an acknowledged response survives a
process kill; state is rebuilt by replaying the log on startup.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path


class StoreUnavailable(RuntimeError):
    pass


class EventLog:
    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self.path, "a", encoding="utf-8")
        except OSError as exc:
            raise StoreUnavailable(f"cannot open record log {self.path}: {exc}") from exc

    def append(self, record: dict) -> None:
        line = json.dumps(record, sort_keys=True, separators=(",", ":"))
        try:
            with self._lock:
                self._fh.write(line + "\n")
                self._fh.flush()
                os.fsync(self._fh.fileno())
        except OSError as exc:
            raise StoreUnavailable(f"append to {self.path} failed: {exc}") from exc

    def replay(self) -> list[dict]:
        """All records in append order; a torn trailing line is skipped.

        A partial last line can only be a record that was never
        acknowledged (the crash happened before fsync returned), so
        dropping it is safe.
        """
        records = []
        try:
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        records.append(json.loads(line))
                    except json.JSONDecodeError:
                        break
        except FileNotFoundError:
            return []
        except OSError as exc:
            raise StoreUnavailable(f"replay of {self.path} failed: {exc}") from exc
        return records

    def close(self) -> None:
        with self._lock:
            self._fh.close()
