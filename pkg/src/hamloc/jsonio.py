"""Canonical JSON and a content-addressed disk cache.

Canonical form is normative for hashing and for byte-identical reports:
sorted keys, compact separators, UTF-8, a single trailing LF.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from pathlib import Path


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def content_key(operation: str, payload, bounds=None, version: str = "") -> str:
    blob = canonical_dumps(
        {"operation": operation, "payload": payload, "bounds": bounds, "version": version}
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def write_canonical(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj), encoding="utf-8")


def load_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


class DiskCache:
    """Content-addressed cache of canonical JSON outputs.

    Writes are atomic (temp file + rename) so concurrent processes can
    share a cache directory.
    """

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str):
        path = self._path(key)
        if not path.exists():
            return None
        entry = json.loads(path.read_text(encoding="utf-8"))
        return entry["output"]

    def put(self, key: str, output, operation: str, version: str) -> None:
        entry = {
            "key": key,
            "operation": operation,
            "tool_version": version,
            "created": time.time(),
            "output": output,
        }
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(canonical_dumps(entry))
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
