"""Small shared helpers: atomic file writes and content checksums."""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path


def content_checksum(text: str) -> str:
    """Hex digest used to fingerprint artifact bodies (first 12 hex chars)."""
    return hashlib.md5(text.encode("utf-8")).hexdigest()[:12]


def atomic_write_text(path: Path | str, text: str) -> None:
    """Write text to a temp file in the target directory, then rename.

    Readers never observe a half-written artifact.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_bytes(path: Path | str, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
