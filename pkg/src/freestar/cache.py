"""On-disk result cache: one JSON file per key, guarded by a checksum."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from . import __version__

log = logging.getLogger(__name__)


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


class ResultCache:
    def __init__(self, directory, version: str = __version__):
        self.dir = Path(directory)
        self.version = version

    def key(self, schema: str, operation: str, bounds: dict) -> str:
        return _digest(_canonical({"schema": schema, "op": operation,
                                   "bounds": bounds, "version": self.version}))

    def path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def get(self, key: str):
        p = self.path(key)
        if not p.exists():
            return None
        try:
            entry = json.loads(p.read_text())
            payload = entry["payload"]
            if entry.get("checksum") != _digest(_canonical(payload)):
                raise ValueError("checksum mismatch")
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("discarding corrupt cache entry %s: %s", p.name, exc)
            p.unlink(missing_ok=True)
            return None
        return payload

    def put(self, key: str, payload) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "checksum": _digest(_canonical(payload)), "payload": payload}
        tmp = self.path(key).with_suffix(".tmp")
        tmp.write_text(_canonical(entry))
        os.replace(tmp, self.path(key))

    def fetch(self, schema: str, operation: str, bounds: dict, compute):
        """Cached value for the key, computing and storing it on a miss."""
        k = self.key(schema, operation, bounds)
        hit = self.get(k)
        if hit is not None:
            return hit
        value = compute()
        self.put(k, value)
        # round-trip so callers see the same value warm or cold
        return json.loads(_canonical(value))
