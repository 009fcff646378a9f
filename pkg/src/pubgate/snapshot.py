"""Read-once, immutable view of a project tree."""

from __future__ import annotations

import hashlib
import logging
import os
import stat
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

logger = logging.getLogger(__name__)

DEFAULT_MAX_FILE_BYTES = 64 * 1024 * 1024
SNIFF_BYTES = 8 * 1024
# Directories recorded by path and size only.
UNLOADED_DIRS = frozenset({"node_modules", ".git"})


class SnapshotError(Exception):
    """The project root cannot be snapshotted."""


@dataclass(frozen=True)
class FileRecord:
    size_bytes: int
    kind: str  # "text" or "binary"
    content: bytes | None = None
    sha256: str | None = None
    is_symlink: bool = False

    @property
    def text(self) -> str | None:
        if self.kind != "text" or self.content is None:
            return None
        return self.content.decode("utf-8", errors="replace")


@dataclass(frozen=True)
class ProjectSnapshot:
    root: str
    files: Mapping[str, FileRecord]
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "files", MappingProxyType(dict(sorted(self.files.items()))))

    def __contains__(self, path: str) -> bool:
        return path in self.files

    def get(self, path: str) -> FileRecord | None:
        return self.files.get(path)

    def text(self, path: str) -> str | None:
        record = self.files.get(path)
        return record.text if record else None

    def directories(self) -> set[str]:
        dirs: set[str] = set()
        for path in self.files:
            parts = path.split("/")[:-1]
            for i in range(1, len(parts) + 1):
                dirs.add("/".join(parts[:i]))
        return dirs

    def with_files(self, extra: Mapping[str, FileRecord]) -> ProjectSnapshot:
        """Copy of this snapshot with *extra* records added (used for what-if probes)."""
        merged = dict(self.files)
        merged.update(extra)
        return ProjectSnapshot(self.root, merged, self.warnings)


def classify_bytes(data: bytes) -> str:
    return "binary" if b"\x00" in data[:SNIFF_BYTES] else "text"


def record_from_bytes(data: bytes) -> FileRecord:
    return FileRecord(size_bytes=len(data), kind=classify_bytes(data), content=data)


def snapshot_from_mapping(files: Mapping[str, str | bytes], root: str = "/virtual") -> ProjectSnapshot:
    """Build a snapshot from in-memory contents, keyed by relative path."""
    records = {}
    for path, data in files.items():
        raw = data.encode("utf-8") if isinstance(data, str) else data
        records[path] = record_from_bytes(raw)
    return ProjectSnapshot(root, records)


def _in_unloaded_dir(rel: str) -> bool:
    return any(part in UNLOADED_DIRS for part in rel.split("/")[:-1])


def _hash_stream(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1024 * 1024), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _read_record(path: Path, size: int, max_file_bytes: int) -> FileRecord:
    with path.open("rb") as fh:
        head = fh.read(SNIFF_BYTES)
        kind = classify_bytes(head)
        if size > max_file_bytes:
            return FileRecord(size, kind, content=None, sha256=_hash_stream(path))
        data = head + fh.read()
    return FileRecord(len(data), kind, content=data)


def snapshot_project(root: str | os.PathLike, max_file_bytes: int = DEFAULT_MAX_FILE_BYTES) -> ProjectSnapshot:
    base = Path(root)
    if not base.is_dir():
        raise SnapshotError(f"not a directory: {root}")
    base = base.resolve()

    records: dict[str, FileRecord] = {}
    warnings: list[str] = []
    for dirpath, dirnames, filenames in os.walk(base, followlinks=False):
        dirnames.sort()
        current = Path(dirpath)
        names = list(filenames)
        for d in list(dirnames):
            if (current / d).is_symlink():
                dirnames.remove(d)
                names.append(d)
        for name in sorted(names):
            full = current / name
            rel = full.relative_to(base).as_posix()
            try:
                st = full.lstat()
            except OSError as exc:
                warnings.append(f"{rel}: {exc.strerror or exc}")
                continue
            if stat.S_ISLNK(st.st_mode):
                records[rel] = FileRecord(st.st_size, "binary", is_symlink=True)
                continue
            if not stat.S_ISREG(st.st_mode):
                continue
            if _in_unloaded_dir(rel):
                records[rel] = FileRecord(st.st_size, "binary")
                continue
            try:
                records[rel] = _read_record(full, st.st_size, max_file_bytes)
            except OSError as exc:
                warnings.append(f"{rel}: unreadable ({exc.strerror or exc})")
                records[rel] = FileRecord(st.st_size, "binary")
    for w in warnings:
        logger.warning("snapshot: %s", w)
    return ProjectSnapshot(base.as_posix(), records, tuple(warnings))
