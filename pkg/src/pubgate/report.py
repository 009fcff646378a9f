"""Text and JSON renderings of a scan. Output depends only on its inputs."""

from __future__ import annotations

import json
from typing import Any, Iterable

from pubgate.model import Category, Finding, Severity, sort_findings
from pubgate.policy import GateDecision

REPORT_VERSION = "1"
FORMATS = ("text", "json")


def finding_to_dict(finding: Finding) -> dict[str, Any]:
    return {
        "rule_id": finding.rule_id,
        "category": finding.category.value,
        "severity": finding.severity.label,
        "cwe": finding.cwe,
        "file": finding.file,
        "line": finding.line,
        "message": finding.message,
        "remediation": finding.remediation,
        "evidence": finding.evidence,
    }


def finding_from_dict(data: dict[str, Any]) -> Finding:
    return Finding(
        rule_id=data["rule_id"],
        category=Category(data["category"]),
        severity=Severity.parse(data["severity"]),
        cwe=data.get("cwe"),
        file=data["file"],
        line=data.get("line"),
        message=data["message"],
        remediation=data["remediation"],
        evidence=data.get("evidence"),
    )


def _summary(counts) -> str:
    total = sum(counts.values())
    noun = "finding" if total == 1 else "findings"
    if not total:
        return f"0 {noun}"
    detail = ", ".join(f"{counts[s]} {s.label}" for s in sorted(Severity, reverse=True))
    return f"{total} {noun} ({detail})"


def _verdict_line(decision: GateDecision) -> str:
    if not decision.blocked:
        return f"PASS under the {decision.policy_name} policy"
    reasons = [f"{sev.label} {count} > {limit}" for sev, count, limit in decision.violated_budgets]
    reasons += [f"hard-block {f.rule_id} at {f.location}" for f in decision.hard_blocks]
    return f"BLOCKED under the {decision.policy_name} policy: " + "; ".join(reasons)


def render_text(findings: Iterable[Finding], decision: GateDecision) -> str:
    ordered = sort_findings(findings)
    out: list[str] = []
    for severity in sorted(Severity, reverse=True):
        group = [f for f in ordered if f.severity == severity]
        if not group:
            continue
        out.append(f"{severity.name} ({len(group)})")
        for f in group:
            out.append(f"  {severity.name} {f.rule_id} {f.location} {f.message}")
            if f.evidence:
                out.append(f"      evidence: {f.evidence}")
        out.append("")

    fixes: dict[tuple[str, str], list[str]] = {}
    for f in ordered:
        fixes.setdefault((f.rule_id, f.remediation), []).append(f.location)
    if fixes:
        out.append("Remediation")
        for (rule_id, remediation), locations in fixes.items():
            where = ", ".join(locations[:3]) + (f" (+{len(locations) - 3} more)" if len(locations) > 3 else "")
            out.append(f"  {rule_id} [{where}]: {remediation}")
        out.append("")

    out.append(_verdict_line(decision))
    out.append(_summary(decision.counts))
    return "\n".join(out) + "\n"


def report_dict(findings: Iterable[Finding], decision: GateDecision) -> dict[str, Any]:
    ordered = sort_findings(findings)
    return {
        "version": REPORT_VERSION,
        "verdict": decision.verdict,
        "policy": decision.policy_name,
        "counts": {s.label: decision.counts[s] for s in sorted(Severity, reverse=True)},
        "violated_budgets": [
            {"severity": sev.label, "count": count, "max": limit}
            for sev, count, limit in decision.violated_budgets
        ],
        "hard_blocks": [{"rule_id": f.rule_id, "file": f.file, "line": f.line} for f in decision.hard_blocks],
        "findings": [finding_to_dict(f) for f in ordered],
    }


def render_json(findings: Iterable[Finding], decision: GateDecision) -> str:
    return json.dumps(report_dict(findings, decision), indent=2, ensure_ascii=False) + "\n"


def render_report(findings: Iterable[Finding], decision: GateDecision, format: str = "text") -> bytes:
    if format == "text":
        return render_text(findings, decision).encode("utf-8")
    if format == "json":
        return render_json(findings, decision).encode("utf-8")
    raise ValueError(f"unknown report format: {format!r}")
