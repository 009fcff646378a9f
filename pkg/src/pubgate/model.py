"""Shared vocabulary: severities, categories, findings and rule descriptors."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

EVIDENCE_MAX_CHARS = 120
MASK_SUFFIX = "…"


class Severity(enum.IntEnum):
    """Finding severity. Integer values give the total order."""

    INFO = 0
    LOW = 1
    MEDIUM = 2
    HIGH = 3
    CRITICAL = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: str | Severity) -> Severity:
        if isinstance(value, Severity):
            return value
        try:
            return cls[value.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown severity: {value!r}") from None


class Category(str, enum.Enum):
    SOURCE_MAP = "source_map"
    CONFIG = "config"
    SECRET = "secret"
    DEPENDENCY = "dependency"
    ARTIFACT = "artifact"

    @property
    def rule_prefix(self) -> str:
        return _PREFIXES[self]

    @property
    def title(self) -> str:
        return _TITLES[self]


_PREFIXES = {
    Category.SOURCE_MAP: "SM",
    Category.CONFIG: "CF",
    Category.SECRET: "SC",
    Category.DEPENDENCY: "DP",
    Category.ARTIFACT: "AR",
}

_TITLES = {
    Category.SOURCE_MAP: "Source Map",
    Category.CONFIG: "Config",
    Category.SECRET: "Secret",
    Category.DEPENDENCY: "Dependency",
    Category.ARTIFACT: "Artifact",
}


def severity_at_least(severity: Severity, floor: Severity) -> bool:
    return severity >= floor


def mask_secret(value: str) -> str:
    """Keep the first four characters of *value* and elide the rest.

    Short values keep at most half their length so the mask never reveals
    the whole secret.
    """
    return value[: min(4, len(value) // 2)] + MASK_SUFFIX


def is_safe_relative_path(path: str) -> bool:
    if not path or path.startswith("/") or "\\" in path:
        return False
    if len(path) > 1 and path[1] == ":":
        return False
    return all(part not in ("", ".", "..") for part in path.split("/"))


@dataclass(frozen=True)
class Finding:
    rule_id: str
    category: Category
    severity: Severity
    file: str
    message: str
    remediation: str
    line: int | None = None
    cwe: str | None = None
    evidence: str | None = None

    def __post_init__(self) -> None:
        if not self.remediation.strip():
            raise ValueError(f"{self.rule_id}: remediation must be non-empty")
        if not is_safe_relative_path(self.file):
            raise ValueError(f"{self.rule_id}: file must be project-relative: {self.file!r}")
        if self.line is not None and self.line < 1:
            raise ValueError(f"{self.rule_id}: line numbers are 1-based")
        if not self.rule_id.startswith(self.category.rule_prefix):
            raise ValueError(f"{self.rule_id}: prefix does not match {self.category.value}")
        if self.evidence is not None and len(self.evidence) > EVIDENCE_MAX_CHARS:
            raise ValueError(f"{self.rule_id}: evidence longer than {EVIDENCE_MAX_CHARS} chars")

    @property
    def location(self) -> str:
        return self.file if self.line is None else f"{self.file}:{self.line}"

    def sort_key(self) -> tuple:
        return (-int(self.severity), self.file, self.line is None, self.line or 0, self.rule_id)


@dataclass(frozen=True)
class RuleDescriptor:
    rule_id: str
    category: Category
    default_severity: Severity
    title: str
    description: str
    remediation: str
    cwe: str | None = None

    def __post_init__(self) -> None:
        if not self.rule_id.startswith(self.category.rule_prefix):
            raise ValueError(f"{self.rule_id}: prefix does not match {self.category.value}")


def sort_findings(findings: Iterable[Finding]) -> list[Finding]:
    """Order by severity (descending), file, line (absent last), rule id.

    The sort is stable: findings with equal keys keep their input order.
    """
    return sorted(findings, key=Finding.sort_key)
