from __future__ import annotations

import json

import pytest

from pubgate.model import Severity
from pubgate.policy import ConfigError, builtin_policy, evaluate, load_policy_file, policy_from_dict
from pubgate.rules import make_finding


def _findings(crit=0, high=0, med=0, low=0, info=0, sm001=False):
    out = []
    out += [make_finding("AR001", f"k{i}.pem", "m") for i in range(crit)]
    out += [make_finding("SM002", f"h{i}.map", "m") for i in range(high)]
    out += [make_finding("AR003", f"m{i}", "m") for i in range(med)]
    out += [make_finding("SM004", f"l{i}.map", "m") for i in range(low)]
    out += [make_finding("AR002", f".env.{i}.example", "m", severity=Severity.INFO) for i in range(info)]
    if sm001:
        out.append(make_finding("SM001", "cli.js.map", "m", severity=Severity.MEDIUM))
    return out


def test_builtin_budgets():
    assert builtin_policy("default").budgets[Severity.MEDIUM] == 5
    assert builtin_policy("strict").budgets[Severity.LOW] == 0
    permissive = builtin_policy("permissive")
    assert permissive.budgets[Severity.HIGH] == 3 and permissive.hard_block_rule_ids == frozenset()
    assert builtin_policy("default").hard_block_rule_ids == {"SM001"}
    with pytest.raises(ConfigError):
        builtin_policy("nosuch")


def test_leak_profile_blocked_by_default():
    decision = evaluate(_findings(crit=2, high=4, med=4) + [make_finding("SM001", "cli.js.map", "m")],
                        builtin_policy("default"))
    assert decision.blocked
    assert [v[0] for v in decision.violated_budgets] == [Severity.CRITICAL, Severity.HIGH]
    assert [f.rule_id for f in decision.hard_blocks] == ["SM001"]


def test_empty_passes_strict():
    assert not evaluate([], builtin_policy("strict")).blocked


def test_permissive_budget_arithmetic():
    assert not evaluate(_findings(high=3, med=10), builtin_policy("permissive")).blocked
    assert evaluate(_findings(crit=1, high=1, med=5), builtin_policy("permissive")).blocked


def test_hard_block_dominates_budgets():
    findings = _findings(sm001=True)
    assert evaluate(findings, builtin_policy("default")).blocked
    assert evaluate(findings, builtin_policy("strict")).blocked
    assert not evaluate(findings, builtin_policy("permissive")).blocked


def test_info_never_blocks_builtins():
    for name in ("default", "strict", "permissive"):
        assert not evaluate(_findings(info=50), builtin_policy(name)).blocked


def test_policy_file_round_trip(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"name": "ci", "budgets": {"critical": 0, "high": 1, "medium": "unlimited",
                                                          "low": "unlimited", "info": "unlimited"},
                                "hard_block_rules": ["SM001", "AR001"]}))
    policy = load_policy_file(path)
    assert policy.name == "ci" and policy.budgets[Severity.MEDIUM] is None
    assert policy.hard_block_rule_ids == {"SM001", "AR001"}


@pytest.mark.parametrize("data", [
    [],
    {"budgets": {"critical": 0}},
    {"budgets": {"critical": 0, "high": 0, "medium": 0, "low": 0, "info": -1}},
    {"budgets": {"critical": 0, "high": 0, "medium": 0, "low": 0, "info": "lots"}},
    {"budgets": {"critical": 0, "high": 0, "medium": 0, "low": 0, "info": 0, "urgent": 1}},
    {"budgets": {"critical": 0, "high": 0, "medium": 0, "low": 0, "info": 0}, "hard_block_rules": ["ZZ001"]},
    {"budgets": {"critical": 0, "high": 0, "medium": 0, "low": 0, "info": 0}, "extra": 1},
])
def test_invalid_policies_rejected(data):
    with pytest.raises(ConfigError):
        policy_from_dict(data)


def test_unreadable_policy_file(tmp_path):
    with pytest.raises(ConfigError):
        load_policy_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ConfigError):
        load_policy_file(bad)
