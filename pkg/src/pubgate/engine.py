"""Pipeline: snapshot, publish simulation, scanners, sorted findings."""

from __future__ import annotations

import os
from dataclasses import dataclass

from pubgate.model import Finding, sort_findings
from pubgate.policy import GateDecision, Policy, builtin_policy, evaluate
from pubgate.publish import PublishSet, simulate_publish
from pubgate.scanners import run_all
from pubgate.snapshot import DEFAULT_MAX_FILE_BYTES, ProjectSnapshot, snapshot_project


@dataclass(frozen=True)
class ScanResult:
    snapshot: ProjectSnapshot
    publish: PublishSet
    findings: tuple[Finding, ...]
    decision: GateDecision

    @property
    def warnings(self) -> tuple[str, ...]:
        return tuple(self.snapshot.warnings) + tuple(self.publish.warnings)


def scan_snapshot(snapshot: ProjectSnapshot, policy: Policy | None = None) -> ScanResult:
    policy = policy or builtin_policy("default")
    publish = simulate_publish(snapshot)
    findings = tuple(sort_findings(run_all(snapshot, publish, policy.size_thresholds)))
    return ScanResult(snapshot, publish, findings, evaluate(findings, policy))


def scan_project(
    root: str | os.PathLike, policy: Policy | None = None, max_file_bytes: int = DEFAULT_MAX_FILE_BYTES
) -> ScanResult:
    return scan_snapshot(snapshot_project(root, max_file_bytes), policy)
