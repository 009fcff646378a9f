"""Artifact hygiene: sensitive or junk files in the publish set, and oversized files."""

from __future__ import annotations

import fnmatch
import posixpath
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from pubgate.model import Finding, Severity
from pubgate.publish import PublishSet
from pubgate.rules import make_finding
from pubgate.scanners.common import KEY_GLOBS, basename, in_vendor_dir, is_env_file, is_env_template
from pubgate.snapshot import ProjectSnapshot

MIB = 1024 * 1024

# (rule, directory names reported once per directory, file globs reported per file)
IDE_DIRS = (".vscode", ".idea")
IDE_FILES = ("*.swp", ".ds_store")
LOG_DIRS = ("coverage", ".nyc_output")
LOG_FILES = ("*.log", "npm-debug.log*")


@dataclass(frozen=True)
class SizeThresholds:
    """Largest size (bytes) that does not fire AR005, by lowercase extension."""

    per_extension: Mapping[str, int] = field(default_factory=lambda: MappingProxyType({
        ".js": 5 * MIB, ".mjs": 5 * MIB, ".cjs": 5 * MIB, ".css": 5 * MIB,
        ".map": 1 * MIB,
        ".json": 10 * MIB,
    }))
    absolute: int = 50 * MIB

    def __post_init__(self) -> None:
        if self.absolute < 0 or any(v < 0 for v in self.per_extension.values()):
            raise ValueError("size thresholds must be non-negative")
        object.__setattr__(self, "per_extension", MappingProxyType(
            {k.lower(): int(v) for k, v in self.per_extension.items()}))

    def exceeded(self, path: str, size: int) -> list[str]:
        """Names of the thresholds *size* is strictly above."""
        reasons = []
        ext = posixpath.splitext(path)[1].lower()
        limit = self.per_extension.get(ext)
        if limit is not None and size > limit:
            reasons.append(f"{ext} limit {_human(limit)}")
        if size > self.absolute:
            reasons.append(f"absolute limit {_human(self.absolute)}")
        return reasons


DEFAULT_THRESHOLDS = SizeThresholds()


def _human(size: int) -> str:
    if size >= MIB:
        return f"{size / MIB:.1f} MiB"
    if size >= 1024:
        return f"{size / 1024:.1f} KiB"
    return f"{size} B"


def _matches(name: str, globs) -> bool:
    return any(fnmatch.fnmatchcase(name.lower(), g) for g in globs)


def _topmost_dir(path: str, names) -> str | None:
    parts = path.split("/")[:-1]
    for i, part in enumerate(parts):
        if part.lower() in names:
            return "/".join(parts[: i + 1])
    return None


def scan_artifacts(
    snapshot: ProjectSnapshot, publish: PublishSet, thresholds: SizeThresholds | None = None
) -> list[Finding]:
    thresholds = thresholds or DEFAULT_THRESHOLDS
    findings: list[Finding] = []
    dir_hits: dict[tuple[str, str], int] = {}

    for path in sorted(publish.included):
        record = snapshot.files.get(path)
        if record is None:
            continue
        git_dir = _topmost_dir(path, {".git"})
        if git_dir is not None:
            dir_hits[("AR006", git_dir)] = dir_hits.get(("AR006", git_dir), 0) + 1
            continue
        if in_vendor_dir(path):
            continue
        name = basename(path)

        if _matches(name, KEY_GLOBS):
            findings.append(make_finding("AR001", path, f"key material file {name} ships with the package"))
        if is_env_file(name):
            if is_env_template(name):
                findings.append(make_finding(
                    "AR002", path, f"environment template {name} ships with the package", severity=Severity.INFO,
                    remediation="Templates are usually safe to ship; confirm it holds no real values."))
            else:
                findings.append(make_finding("AR002", path, f"environment file {name} ships with the package"))

        for rule, dirs, globs in (("AR003", IDE_DIRS, IDE_FILES), ("AR004", LOG_DIRS, LOG_FILES)):
            top = _topmost_dir(path, dirs)
            if top is not None:
                dir_hits[(rule, top)] = dir_hits.get((rule, top), 0) + 1
            elif _matches(name, globs):
                kind = "editor metadata" if rule == "AR003" else "debug log"
                findings.append(make_finding(rule, path, f"{kind} {name} ships with the package"))

        reasons = thresholds.exceeded(path, record.size_bytes)
        if reasons:
            findings.append(make_finding(
                "AR005", path,
                f"{_human(record.size_bytes)} ({record.size_bytes} bytes) exceeds the " + " and the ".join(reasons)))

    labels = {"AR003": "editor settings directory", "AR004": "test/coverage output directory",
              "AR006": "version-control directory"}
    for (rule, directory), count in sorted(dir_hits.items()):
        findings.append(make_finding(
            rule, directory, f"{labels[rule]} {directory}/ ships with the package ({count} file(s))",
            remediation=f"Add `{basename(directory)}/` to .npmignore or drop it from the \"files\" list."))
    return findings
