"""Disk cache for provider responses.

Keyed by (provider, operation, normalized parameters, page) so reruns during
an assessment campaign do not re-bill the API quota. Entries expire after a
configurable TTL (default 30 days). Writes are atomic (temp file + rename),
which also makes concurrent writers safe: identical keys carry identical
payloads, so last-write-wins is harmless.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from pathlib import Path
from typing import Any, Callable, Mapping, Optional

from .base import DEFAULT_CACHE_TTL_SECONDS


def cache_key(provider: str, operation: str, params: Mapping[str, Any], page: int) -> str:
    payload = {
        "provider": provider,
        "op": operation,
        "params": {str(k): params[k] for k in sorted(params)},
        "page": page,
    }
    canonical = json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ResponseCache:
    def __init__(
        self,
        root: Path | str,
        *,
        ttl: float = DEFAULT_CACHE_TTL_SECONDS,
        clock: Callable[[], float] = time.time,
    ) -> None:
        self.root = Path(root)
        self.ttl = ttl
        self._clock = clock

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[Any]:
        path = self._path(key)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        try:
            entry = json.loads(raw)
        except json.JSONDecodeError:
            return None
        if self._clock() - entry["stored_at"] > self.ttl:
            return None
        return entry["payload"]

    def put(self, key: str, payload: Any) -> None:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {"stored_at": self._clock(), "payload": payload}
        tmp = path.with_suffix(f".tmp-{os.getpid()}")
        tmp.write_text(json.dumps(entry, ensure_ascii=False), encoding="utf-8")
        os.replace(tmp, path)
