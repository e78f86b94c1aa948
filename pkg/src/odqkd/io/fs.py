"""
Filesystem helpers for odqkd.io (local files only).

Responsibilities
- Directory creation, fsync and atomic rename used by every artifact writer.
- Establish the atomic write path: tmp write → fsync → atomic rename.

Import DAG discipline
- stdlib plus odqkd.io.errors.

Notes
- Atomicity via os.replace is guaranteed only when src and dst reside on the same filesystem;
  the tmp file is therefore created next to its destination.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import BinaryIO

from .errors import IoReadError, IoWriteError

__all__ = [
    "makedirs",
    "open_write",
    "fsync_file",
    "rename_atomic",
    "write_bytes_atomic",
    "write_text_atomic",
    "write_lines_atomic",
    "read_text",
]

logger = logging.getLogger(__name__)


def makedirs(path: str | os.PathLike[str], exist_ok: bool = True) -> None:
    """Create directories recursively (thin wrapper around os.makedirs)."""
    os.makedirs(path, exist_ok=exist_ok)


@contextmanager
def open_write(path: str | os.PathLike[str]) -> Iterator[BinaryIO]:
    """
    Open a file for binary write as a context manager.

    Notes:
        Caller is responsible for fsync and the atomic os.replace of a temporary file.
    """
    fh = open(path, "wb")
    try:
        yield fh
    finally:
        fh.close()


def fsync_file(fh: BinaryIO) -> None:
    """Flush and fsync an open file handle."""
    fh.flush()
    os.fsync(fh.fileno())


def rename_atomic(src: str | os.PathLike[str], dst: str | os.PathLike[str]) -> None:
    """Atomically rename src -> dst on the same filesystem."""
    os.replace(src, dst)


def write_lines_atomic(path: str | os.PathLike[str], chunks: Iterable[bytes]) -> Path:
    """
    Stream byte chunks to `path` through a sibling tmp file, then rename it into place.

    Args:
        path (str | os.PathLike[str]): Final destination.
        chunks (Iterable[bytes]): Content, consumed once.

    Returns:
        Path: The final path.

    Raises:
        IoWriteError: If the directory cannot be created or any write step fails.
    """
    final = Path(path)
    tmp = final.with_name(final.name + ".tmp")
    try:
        makedirs(final.parent)
        with open_write(tmp) as fh:
            for chunk in chunks:
                fh.write(chunk)
            fsync_file(fh)
        rename_atomic(tmp, final)
    except OSError as exc:
        try:
            tmp.unlink(missing_ok=True)
        except OSError:
            pass
        raise IoWriteError(f"failed to write {final}: {exc}") from exc
    logger.debug("wrote %s", final)
    return final


def write_bytes_atomic(path: str | os.PathLike[str], data: bytes) -> Path:
    """Write bytes atomically (see write_lines_atomic)."""
    return write_lines_atomic(path, (data,))


def write_text_atomic(path: str | os.PathLike[str], text: str) -> Path:
    """Write UTF-8 text atomically (see write_lines_atomic)."""
    return write_bytes_atomic(path, text.encode("utf-8"))


def read_text(path: str | os.PathLike[str]) -> str:
    """
    Read a UTF-8 text file.

    Raises:
        IoReadError: If the file is missing or unreadable.
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoReadError(f"cannot read {path}: {exc}") from exc
