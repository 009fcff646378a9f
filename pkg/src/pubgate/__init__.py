"""Pre-publish security gate for npm and Python projects."""

from __future__ import annotations

from pubgate.engine import ScanResult, scan_project, scan_snapshot
from pubgate.model import Category, Finding, RuleDescriptor, Severity, severity_at_least, sort_findings
from pubgate.policy import GateDecision, Policy, builtin_policy, evaluate

__version__ = "0.1.0"

__all__ = [
    "Category",
    "Finding",
    "GateDecision",
    "Policy",
    "RuleDescriptor",
    "ScanResult",
    "Severity",
    "builtin_policy",
    "evaluate",
    "scan_project",
    "scan_snapshot",
    "severity_at_least",
    "sort_findings",
]
