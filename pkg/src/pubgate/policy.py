"""Gate policies: severity budgets plus hard-block rules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from pubgate.model import Finding, Severity
from pubgate.rules import RULES
from pubgate.scanners.artifacts import DEFAULT_THRESHOLDS, SizeThresholds

PASS = "pass"
BLOCKED = "blocked"
UNLIMITED = None


class ConfigError(ValueError):
    """A policy or command-line configuration problem (exit code 2)."""


@dataclass(frozen=True)
class Policy:
    name: str
    # None means unlimited
    budgets: Mapping[Severity, int | None]
    hard_block_rule_ids: frozenset[str] = frozenset()
    size_thresholds: SizeThresholds = field(default=DEFAULT_THRESHOLDS, compare=False)

    def __post_init__(self) -> None:
        missing = set(Severity) - set(self.budgets)
        if missing:
            raise ConfigError(f"policy {self.name!r} has no budget for {sorted(s.label for s in missing)}")
        for severity, budget in self.budgets.items():
            if budget is not None and (not isinstance(budget, int) or isinstance(budget, bool) or budget < 0):
                raise ConfigError(f"policy {self.name!r}: {severity.label} budget must be a non-negative integer")
        unknown = set(self.hard_block_rule_ids) - set(RULES)
        if unknown:
            raise ConfigError(f"policy {self.name!r}: unknown hard-block rule(s) {sorted(unknown)}")
        object.__setattr__(self, "budgets", MappingProxyType(dict(self.budgets)))
        object.__setattr__(self, "hard_block_rule_ids", frozenset(self.hard_block_rule_ids))

    def budget_label(self, severity: Severity) -> str:
        budget = self.budgets[severity]
        return "unlimited" if budget is None else str(budget)


def _budgets(critical, high, medium, low, info) -> dict[Severity, int | None]:
    return {
        Severity.CRITICAL: critical,
        Severity.HIGH: high,
        Severity.MEDIUM: medium,
        Severity.LOW: low,
        Severity.INFO: info,
    }


BUILTIN_POLICIES: Mapping[str, Policy] = MappingProxyType({
    "default": Policy("default", _budgets(0, 0, 5, UNLIMITED, UNLIMITED), frozenset({"SM001"})),
    "strict": Policy("strict", _budgets(0, 0, 0, 0, UNLIMITED), frozenset({"SM001"})),
    # no hard blocks: a map with sourcesContent still counts toward the critical budget
    "permissive": Policy("permissive", _budgets(0, 3, 10, UNLIMITED, UNLIMITED), frozenset()),
})


def builtin_policy(name: str) -> Policy:
    try:
        return BUILTIN_POLICIES[name]
    except KeyError:
        choices = ", ".join(BUILTIN_POLICIES)
        raise ConfigError(f"unknown policy {name!r} (choose from {choices})") from None


def policy_from_dict(data: Any) -> Policy:
    """Build a policy from the JSON policy-file structure.

    {"name": str, "budgets": {severity: int | "unlimited"}, "hard_block_rules": [rule_id],
     "size_thresholds": {"absolute": int, "per_extension": {".ext": int}}}
    """
    if not isinstance(data, dict):
        raise ConfigError("policy file must contain a JSON object")
    unknown_keys = set(data) - {"name", "budgets", "hard_block_rules", "size_thresholds"}
    if unknown_keys:
        raise ConfigError(f"unknown policy keys: {sorted(unknown_keys)}")
    name = data.get("name", "custom")
    if not isinstance(name, str) or not name:
        raise ConfigError("policy name must be a non-empty string")

    raw_budgets = data.get("budgets")
    if not isinstance(raw_budgets, dict):
        raise ConfigError("policy budgets must be an object keyed by severity")
    budgets: dict[Severity, int | None] = {}
    for key, value in raw_budgets.items():
        try:
            severity = Severity.parse(key)
        except (ValueError, AttributeError):
            raise ConfigError(f"unknown severity in budgets: {key!r}") from None
        if value == "unlimited" or value is None:
            budgets[severity] = UNLIMITED
        elif isinstance(value, int) and not isinstance(value, bool):
            budgets[severity] = value
        else:
            raise ConfigError(f"budget for {key!r} must be an integer or \"unlimited\"")

    rules = data.get("hard_block_rules", [])
    if not isinstance(rules, list) or not all(isinstance(r, str) for r in rules):
        raise ConfigError("hard_block_rules must be a list of rule ids")

    thresholds = DEFAULT_THRESHOLDS
    raw_thresholds = data.get("size_thresholds")
    if raw_thresholds is not None:
        if not isinstance(raw_thresholds, dict):
            raise ConfigError("size_thresholds must be an object")
        try:
            per_ext = {**DEFAULT_THRESHOLDS.per_extension, **raw_thresholds.get("per_extension", {})}
            absolute = raw_thresholds.get("absolute", DEFAULT_THRESHOLDS.absolute)
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in [absolute, *per_ext.values()]):
                raise ValueError("thresholds must be integers")
            thresholds = SizeThresholds(per_ext, absolute)
        except (ValueError, TypeError, AttributeError) as exc:
            raise ConfigError(f"invalid size_thresholds: {exc}") from None

    return Policy(name, budgets, frozenset(rules), thresholds)


def load_policy_file(path: str | Path) -> Policy:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read policy file {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"policy file {path} is not valid JSON: {exc}") from None
    return policy_from_dict(data)


@dataclass(frozen=True)
class GateDecision:
    verdict: str
    policy_name: str
    counts: Mapping[Severity, int]
    violated_budgets: tuple[tuple[Severity, int, int], ...] = ()
    hard_blocks: tuple[Finding, ...] = ()

    def __post_init__(self) -> None:
        expected = BLOCKED if (self.violated_budgets or self.hard_blocks) else PASS
        if self.verdict != expected:
            raise ValueError("verdict must be blocked exactly when a budget or hard block is violated")

    @property
    def blocked(self) -> bool:
        return self.verdict == BLOCKED


def count_by_severity(findings: Iterable[Finding]) -> dict[Severity, int]:
    counts = {severity: 0 for severity in sorted(Severity, reverse=True)}
    for finding in findings:
        counts[finding.severity] += 1
    return counts


def evaluate(findings: Iterable[Finding], policy: Policy) -> GateDecision:
    findings = list(findings)
    counts = count_by_severity(findings)
    violated = tuple(
        (severity, counts[severity], budget)
        for severity in sorted(Severity, reverse=True)
        if (budget := policy.budgets[severity]) is not None and counts[severity] > budget
    )
    hard = tuple(sorted(
        (f for f in findings if f.rule_id in policy.hard_block_rule_ids), key=Finding.sort_key))
    return GateDecision(
        verdict=BLOCKED if violated or hard else PASS,
        policy_name=policy.name,
        counts=MappingProxyType(counts),
        violated_budgets=violated,
        hard_blocks=hard,
    )
