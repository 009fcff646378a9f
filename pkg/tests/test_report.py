from __future__ import annotations

import json
from collections import Counter

from pubgate.policy import builtin_policy, evaluate
from pubgate.report import finding_from_dict, render_report
from pubgate.rules import make_finding


def _sample():
    return [
        make_finding("AR003", ".vscode", "editor dir"),
        make_finding("SM001", "cli.js.map", "embedded"),
        make_finding("SC001", "src/a.js", "aws key", line=3, evidence="AKIA…"),
    ]


def test_empty_pass_json():
    decision = evaluate([], builtin_policy("default"))
    data = json.loads(render_report([], decision, "json"))
    assert data["version"] == "1" and data["verdict"] == "pass" and data["findings"] == []
    assert list(data)[:4] == ["version", "verdict", "policy", "counts"]


def test_json_round_trips_finding_multiset():
    findings = _sample()
    data = json.loads(render_report(findings, evaluate(findings, builtin_policy("default")), "json"))
    assert Counter(finding_from_dict(d) for d in data["findings"]) == Counter(findings)
    assert [d["rule_id"] for d in data["findings"]] == ["SM001", "SC001", "AR003"]


def test_rendering_is_deterministic():
    findings = _sample()
    decision = evaluate(findings, builtin_policy("default"))
    for fmt in ("json", "text"):
        assert render_report(findings, decision, fmt) == render_report(list(reversed(findings)), decision, fmt)


def test_text_layout():
    findings = _sample()
    text = render_report(findings, evaluate(findings, builtin_policy("default")), "text").decode()
    assert "CRITICAL SC001 src/a.js:3 aws key" in text
    assert text.index("CRITICAL SC001") < text.index("MEDIUM AR003") < text.index("Remediation")
    assert "BLOCKED under the default policy" in text
    assert text.rstrip().endswith("3 findings (2 critical, 0 high, 1 medium, 0 low, 0 info)")


def test_zero_findings_text():
    text = render_report([], evaluate([], builtin_policy("default")), "text").decode()
    assert text.splitlines()[-1] == "0 findings" and "PASS" in text
