# genericity/services/cache.py
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from genericity.core.config import CACHE_DIR, CACHE_FORMAT_VERSION, LOG_LEVEL
from genericity.core.errors import CacheIOError
from genericity.schemas.run_spec import CacheEntry
from genericity.services.generators import LIBRARY_VERSION

logger = logging.getLogger("genericity.cache")
logger.setLevel(LOG_LEVEL)

CACHE_MAGIC = "genericity-cache"


def content_hash(**fields) -> str:
    text = json.dumps(fields, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ResultCache:
    """Line-oriented result files, one per spec hash, under a cache directory."""

    def __init__(self, directory: str | Path | None = None, library_version: int = LIBRARY_VERSION):
        directory = directory if directory is not None else CACHE_DIR
        self.directory = Path(directory) if directory else None
        self.library_version = library_version

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def path(self, spec_hash: str) -> Path:
        return self.directory / f"{spec_hash}.cache"

    def read(self, spec_hash: str) -> CacheEntry | None:
        if not self.enabled:
            return None
        path = self.path(spec_hash)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        except OSError as exc:
            logger.warning(f"Cache read failed for {path}: {exc}")
            return None
        lines = text.split("\n")
        head = lines[0].split(" ")
        if len(head) != 6 or head[0] != CACHE_MAGIC:
            logger.warning(f"Cache miss: {path.name} has no valid header")
            return None
        _, version, library, stored_hash, checksum, count = head
        if version != str(CACHE_FORMAT_VERSION) or library != str(self.library_version):
            logger.info(f"Cache miss: {path.name} is stale (format {version}, library {library})")
            return None
        if stored_hash != spec_hash:
            logger.info(f"Cache miss: {path.name} belongs to another run spec")
            return None
        payload = lines[1:-1] if lines[-1] == "" else lines[1:]
        if not count.isdigit() or int(count) != len(payload):
            logger.warning(f"Cache miss: {path.name} is truncated")
            return None
        entry = CacheEntry(library_version=int(library), spec_hash=spec_hash, payload=payload)
        if entry.checksum() != checksum:
            logger.warning(f"Cache miss: {path.name} fails its checksum")
            return None
        logger.debug(f"Cache hit: {path.name} ({len(payload)} records)")
        return entry

    def write(self, entry: CacheEntry) -> Path:
        if not self.enabled:
            raise CacheIOError("no cache directory configured")
        path = self.path(entry.spec_hash)
        head = " ".join(
            [CACHE_MAGIC, str(entry.format_version), str(entry.library_version),
             entry.spec_hash, entry.checksum(), str(len(entry.payload))]
        )
        tmp = path.with_suffix(".tmp")
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(head + "\n")
                for line in entry.payload:
                    fh.write(line + "\n")
            os.replace(tmp, path)
        except OSError as exc:
            raise CacheIOError(f"cannot write cache file {path}: {exc}")
        logger.debug(f"Cached {len(entry.payload)} records in {path.name}")
        return path

    def roundtrip(self, entry: CacheEntry) -> CacheEntry:
        self.write(entry)
        back = self.read(entry.spec_hash)
        if back is None:
            raise CacheIOError(f"cache entry {entry.spec_hash} did not read back")
        return back

    def lines(self, spec_hash: str, compute) -> list[str]:
        """Cached payload for spec_hash, computing and storing it on a miss."""
        entry = self.read(spec_hash)
        if entry is not None:
            return entry.payload
        payload = compute()
        if self.enabled:
            self.write(CacheEntry(library_version=self.library_version, spec_hash=spec_hash, payload=payload))
        return payload
