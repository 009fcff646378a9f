"""The five scanners. Each is a pure function of the snapshot (and publish set)."""

from __future__ import annotations

from pubgate.model import Finding
from pubgate.publish import PublishSet
from pubgate.scanners.artifacts import SizeThresholds, scan_artifacts
from pubgate.scanners.config import scan_config
from pubgate.scanners.dependencies import scan_dependencies
from pubgate.scanners.secrets import scan_secrets
from pubgate.scanners.sourcemap import scan_source_maps
from pubgate.snapshot import ProjectSnapshot


def run_all(
    snapshot: ProjectSnapshot, publish: PublishSet, thresholds: SizeThresholds | None = None
) -> list[Finding]:
    """Run every scanner in a fixed order and concatenate the results."""
    return [
        *scan_source_maps(snapshot, publish),
        *scan_config(snapshot, publish),
        *scan_secrets(snapshot, publish),
        *scan_dependencies(snapshot),
        *scan_artifacts(snapshot, publish, thresholds),
    ]


__all__ = [
    "SizeThresholds",
    "run_all",
    "scan_artifacts",
    "scan_config",
    "scan_dependencies",
    "scan_secrets",
    "scan_source_maps",
]
