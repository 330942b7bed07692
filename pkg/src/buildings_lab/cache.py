"""Content-addressed on-disk cache for expensive build and suite results.

A cache entry is keyed by the SHA-256 of a canonical JSON header describing
the computation. The stored blob carries its own payload digest on the first
line, so a corrupt or truncated entry is detected on read and treated as a
miss; atomic write-then-rename keeps concurrent writers safe.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

ENV_VAR = "BUILDINGS_LAB_CACHE"
_DIGEST_PREFIX = "sha256:"

__all__ = ["ENV_VAR", "Cache", "cache_key", "stable_json"]


def stable_json(obj) -> str:
    """Canonical JSON: sorted keys, compact separators, no trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(header: dict) -> str:
    return hashlib.sha256(stable_json(header).encode()).hexdigest()


def default_cache_dir() -> Path:
    return Path.home() / ".cache" / "buildings-lab"


class Cache:
    """Directory-backed store; an explicit root wins over the environment."""

    def __init__(self, root: str | os.PathLike | None = None):
        if root is None:
            root = os.environ.get(ENV_VAR) or default_cache_dir()
        self.root = Path(root)
        self.hits = 0
        self.misses = 0
        self.touched: list[str] = []

    def path_for(self, key: str) -> Path:
        return self.root / key[:2] / key

    def get(self, header: dict) -> str | None:
        key = cache_key(header)
        self.touched.append(key)
        return self.get_by_key(key)

    def get_by_key(self, key: str) -> str | None:
        path = self.path_for(key)
        try:
            raw = path.read_text()
        except FileNotFoundError:
            self.misses += 1
            return None
        head, _, payload = raw.partition("\n")
        if not head.startswith(_DIGEST_PREFIX):
            self.misses += 1
            return None
        digest = hashlib.sha256(payload.encode()).hexdigest()
        if digest != head[len(_DIGEST_PREFIX) :]:
            self.misses += 1
            return None
        self.hits += 1
        return payload

    def put(self, header: dict, payload: str) -> str:
        key = cache_key(header)
        path = self.path_for(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        blob = (
            _DIGEST_PREFIX + hashlib.sha256(payload.encode()).hexdigest() + "\n" + payload
        )
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(blob)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        if key not in self.touched:
            self.touched.append(key)
        return key

    def get_or_build(self, header: dict, build) -> str:
        """Cached payload for the header, calling build() on a miss."""
        payload = self.get(header)
        if payload is None:
            payload = build()
            self.put(header, payload)
        return payload
