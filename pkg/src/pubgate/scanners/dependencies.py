"""Supply-chain risks in package.json, requirements files and lockfiles."""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass

from packaging.requirements import InvalidRequirement, Requirement
from packaging.specifiers import SpecifierSet

from pubgate.model import Finding, Severity
from pubgate.rules import make_finding
from pubgate.scanners.common import basename, line_of
from pubgate.snapshot import ProjectSnapshot

NPM_LOCKFILES = ("package-lock.json", "npm-shrinkwrap.json", "yarn.lock", "pnpm-lock.yaml")
PIP_LOCKFILES = ("poetry.lock", "Pipfile.lock", "uv.lock", "pdm.lock")
INSTALL_HOOKS = ("preinstall", "install", "postinstall")

# peerDependencies are ranges by design and are resolved by the consumer
NPM_SECTIONS = (
    ("dependencies", "runtime"),
    ("optionalDependencies", "runtime"),
    ("devDependencies", "dev"),
)


class VersionSpecClass(str, enum.Enum):
    PINNED = "pinned"
    RANGE = "range"
    WILDCARD = "wildcard"
    TAG = "tag"
    URL = "url"
    PATH = "path"


@dataclass(frozen=True)
class DependencyRecord:
    name: str
    spec: str
    spec_class: VersionSpecClass
    ecosystem: str  # npm | pip
    section: str  # runtime | dev
    file: str = "package.json"
    line: int | None = None
    note: str | None = None
    hashed: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("dependency name must be non-empty")


_SEMVER = re.compile(r"^[v=]*\d+\.\d+\.\d+(?:-[0-9A-Za-z.-]+)?(?:\+[0-9A-Za-z.-]+)?$")
_PART = r"(?:\d+|[xX*])"
_COMPARATOR = re.compile(
    rf"^(?:\^|~>?|[<>]=?|=)?v?{_PART}(?:\.{_PART}(?:\.{_PART}(?:-[0-9A-Za-z.-]+)?(?:\+[0-9A-Za-z.-]+)?)?)?$"
)
_TAG = re.compile(r"^[A-Za-z][\w.-]*$")
_GITHUB_SHORTHAND = re.compile(r"^[\w.-]+/[\w.-]+(?:#.*)?$")
_URL_PREFIXES = ("http://", "https://", "git://", "git+", "git@", "github:", "gitlab:", "bitbucket:", "gist:")
_PATH_PREFIXES = ("file:", "link:", "workspace:", "portal:", "./", "../", "/", "~/")
_COMMIT = re.compile(r"[#@][0-9a-f]{40}(?:$|[&#])")
_USERINFO = re.compile(r"(//)[^/@\s]+@")


def redact_url(text: str) -> str:
    """Hide userinfo (tokens) embedded in URLs."""
    return _USERINFO.sub(r"\1***@", text)


def _classify_npm(spec: str) -> tuple[VersionSpecClass, str | None]:
    if spec.startswith("npm:"):
        alias = spec[4:]
        at = alias.rfind("@")
        return _classify_npm(alias[at + 1:].strip() if at > 0 else "")
    if spec in ("", "*", "x", "X"):
        return VersionSpecClass.WILDCARD, None
    lower = spec.lower()
    if lower.startswith(_URL_PREFIXES):
        return VersionSpecClass.URL, None
    if lower.startswith(_PATH_PREFIXES):
        return VersionSpecClass.PATH, None
    if _SEMVER.match(spec):
        return VersionSpecClass.PINNED, None
    if _TAG.match(spec) and not _COMPARATOR.match(spec):
        return VersionSpecClass.TAG, None
    if _GITHUB_SHORTHAND.match(spec):
        return VersionSpecClass.URL, None
    tokens = [t for alt in spec.split("||") for t in alt.split()]
    if tokens and all(t == "-" or _COMPARATOR.match(t) for t in tokens):
        if all(t in ("*", "x", "X") for t in tokens):
            return VersionSpecClass.WILDCARD, None
        return VersionSpecClass.RANGE, None
    return VersionSpecClass.WILDCARD, f"unparseable version spec {spec!r}; treated as wildcard"


def _classify_pip(spec: str) -> tuple[VersionSpecClass, str | None]:
    lower = spec.lower()
    if lower.startswith(_URL_PREFIXES):
        return VersionSpecClass.URL, None
    if lower.startswith(("file:", "./", "../", "/", "~/")):
        return VersionSpecClass.PATH, None
    try:
        req = Requirement(spec)
    except InvalidRequirement:
        return VersionSpecClass.WILDCARD, f"unparseable requirement {spec!r}; treated as wildcard"
    if req.url:
        return (VersionSpecClass.PATH if req.url.startswith("file:") else VersionSpecClass.URL), None
    return _classify_specifier(req.specifier), None


def _classify_specifier(specifier: SpecifierSet) -> VersionSpecClass:
    items = list(specifier)
    if not items:
        return VersionSpecClass.WILDCARD
    if len(items) == 1 and items[0].operator in ("==", "===") and "*" not in items[0].version:
        return VersionSpecClass.PINNED
    return VersionSpecClass.RANGE


def describe_spec(spec: str, ecosystem: str) -> tuple[VersionSpecClass, str | None]:
    """Classify *spec* and return an explanatory note when it could not be parsed."""
    if ecosystem == "npm":
        return _classify_npm(spec.strip())
    if ecosystem == "pip":
        return _classify_pip(spec.strip())
    raise ValueError(f"unknown ecosystem: {ecosystem!r}")


def classify_version_spec(spec: str, ecosystem: str) -> VersionSpecClass:
    return describe_spec(spec, ecosystem)[0]


def _insecure(url: str) -> bool:
    return re.search(r"(?:^|[\s@+])(?:http|git)://", url.lower()) is not None


def _npm_line(text: str, section: str, name: str) -> int | None:
    match = re.search(rf'"{re.escape(section)}"\s*:', text)
    if match is None:
        return None
    sub = re.compile(rf'"{re.escape(name)}"\s*:').search(text, match.end())
    return text.count("\n", 0, sub.start()) + 1 if sub else None


def read_npm_dependencies(text: str, data: dict) -> list[DependencyRecord]:
    records = []
    for section, kind in NPM_SECTIONS:
        deps = data.get(section)
        if not isinstance(deps, dict):
            continue
        for name, spec in deps.items():
            if not name:
                continue
            raw = spec if isinstance(spec, str) else ""
            cls, note = describe_spec(raw, "npm")
            if not isinstance(spec, str):
                cls, note = VersionSpecClass.WILDCARD, f"non-string version spec {spec!r}; treated as wildcard"
            records.append(DependencyRecord(
                name, raw, cls, "npm", kind, line=_npm_line(text, section, name), note=note,
                hashed=bool(_COMMIT.search(raw.lower()))))
    return records


def _logical_requirement_lines(text: str):
    buf, start = "", None
    for number, raw in enumerate(text.splitlines(), 1):
        line = re.sub(r"(^|\s)#.*$", "", raw).rstrip()
        if start is None:
            start = number
        if line.endswith("\\"):
            buf += line[:-1] + " "
            continue
        buf += line
        if buf.strip():
            yield start, buf.strip()
        buf, start = "", None
    if buf.strip():
        yield start, buf.strip()


@dataclass(frozen=True)
class RequirementsFile:
    path: str
    records: tuple[DependencyRecord, ...]
    insecure_indexes: tuple[tuple[int, str], ...]


_INDEX_OPTION = re.compile(r"^(?:-i|--index-url|--extra-index-url|-f|--find-links)(?:\s+|=)(\S+)")


def read_requirements(path: str, text: str) -> RequirementsFile:
    records, indexes = [], []
    for number, line in _logical_requirement_lines(text):
        index = _INDEX_OPTION.match(line)
        if index:
            if _insecure(index.group(1)):
                indexes.append((number, index.group(1)))
            continue
        editable = line.startswith(("-e ", "--editable ", "--editable="))
        if editable:
            line = re.split(r"[\s=]+", line, maxsplit=1)[1].strip() if re.search(r"[\s=]", line) else ""
            if not line:
                continue
        elif line.startswith("-"):
            continue
        hashed = "--hash" in line or bool(re.search(r"#(sha256|sha384|sha512)=", line))
        spec = re.split(r"\s+--", line, maxsplit=1)[0].split(";")[0].strip() if not editable else line
        cls, note = describe_spec(spec, "pip")
        name = spec
        if cls not in (VersionSpecClass.URL, VersionSpecClass.PATH) or "@" in spec:
            try:
                name = Requirement(spec).name
            except InvalidRequirement:
                name = re.split(r"[\s<>=!~;\[@]", spec, maxsplit=1)[0] or spec
        elif "#egg=" in spec:
            name = spec.split("#egg=", 1)[1].split("&")[0]
        if cls == VersionSpecClass.URL and _COMMIT.search(spec.lower()):
            hashed = True
        records.append(DependencyRecord(name, spec, cls, "pip", "runtime", path, number, note, hashed))
    return RequirementsFile(path, tuple(records), tuple(indexes))


def _is_requirements_file(path: str) -> bool:
    return "/" not in path and re.match(r"^requirements.*\.(txt|in)$", path, re.IGNORECASE) is not None


def _has_pip_lock(snapshot: ProjectSnapshot, parsed: list[RequirementsFile]) -> bool:
    if any(name in snapshot.files for name in PIP_LOCKFILES):
        return True
    return any(
        "lock" in req.path.lower() and req.records
        and all(r.spec_class == VersionSpecClass.PINNED for r in req.records)
        for req in parsed
    )


_LOCK_RESOLVED = re.compile(r"""(?:"resolved"\s*:\s*"|resolved\s+"?|tarball:\s*"?)((?:http|git)://[^"\s,]+)""")


def _dependency_findings(record: DependencyRecord) -> list[Finding]:
    dev = record.section == "dev"
    where = f"{record.name}: {redact_url(record.spec)!r}" if record.spec else f"{record.name}: (empty)"
    findings = []
    if record.spec_class in (VersionSpecClass.WILDCARD, VersionSpecClass.TAG):
        kind = "a dist-tag" if record.spec_class == VersionSpecClass.TAG else "a wildcard"
        message = f"{where} is {kind}; any version can be installed" + (" (dev only)" if dev else "")
        if record.note:
            message += f" ({record.note})"
        findings.append(make_finding("DP001", record.file, message, line=record.line,
                                     severity=Severity.LOW if dev else None))
    elif record.spec_class == VersionSpecClass.RANGE:
        findings.append(make_finding(
            "DP002", record.file, f"{where} is a version range" + (" (dev only)" if dev else ""),
            line=record.line, severity=Severity.LOW if dev else None))
    elif record.spec_class == VersionSpecClass.URL:
        if _insecure(record.spec):
            findings.append(make_finding(
                "DP005", record.file, f"{where} is fetched without TLS", line=record.line))
        elif not record.hashed:
            findings.append(make_finding(
                "DP006", record.file, f"{where} is a URL with no commit or content hash", line=record.line))
    return findings


def scan_dependencies(snapshot: ProjectSnapshot) -> list[Finding]:
    findings: list[Finding] = []

    pkg_text = snapshot.text("package.json")
    if pkg_text is not None:
        try:
            data = json.loads(pkg_text)
            if not isinstance(data, dict):
                raise ValueError("top level is not an object")
        except ValueError as exc:
            findings.append(make_finding(
                "DP007", "package.json", f"package.json could not be parsed ({str(exc)[:80]})"))
            data = None
        if data is not None:
            records = read_npm_dependencies(pkg_text, data)
            for record in records:
                findings.extend(_dependency_findings(record))
            if records and not any(name in snapshot.files for name in NPM_LOCKFILES):
                findings.append(make_finding(
                    "DP003", "package.json",
                    f"{len(records)} npm dependencies declared and no lockfile is present"))
            scripts = data.get("scripts")
            if isinstance(scripts, dict):
                for hook in INSTALL_HOOKS:
                    command = scripts.get(hook)
                    if isinstance(command, str):
                        findings.append(make_finding(
                            "DP004", "package.json", f'"{hook}" runs on every install: {command[:80]}',
                            line=line_of(pkg_text, rf'"{hook}"\s*:')))

    parsed = [
        read_requirements(path, snapshot.text(path) or "")
        for path in sorted(snapshot.files)
        if _is_requirements_file(path) and snapshot.files[path].kind == "text"
    ]
    has_lock = _has_pip_lock(snapshot, parsed)
    for req in parsed:
        for record in req.records:
            findings.extend(_dependency_findings(record))
        for number, url in req.insecure_indexes:
            findings.append(make_finding(
                "DP005", req.path, f"package index {redact_url(url)} is used without TLS", line=number))
        pins = any(r.spec_class == VersionSpecClass.PINNED for r in req.records)
        if req.records and not pins and not has_lock and "lock" not in req.path.lower():
            findings.append(make_finding(
                "DP003", req.path, f"no requirement in {basename(req.path)} is pinned with == and no lockfile exists"))

    for lock in NPM_LOCKFILES + PIP_LOCKFILES:
        text = snapshot.text(lock)
        if not text:
            continue
        for match in _LOCK_RESOLVED.finditer(text):
            findings.append(make_finding(
                "DP005", lock, f"lockfile resolves {redact_url(match.group(1))[:90]} without TLS",
                line=text.count("\n", 0, match.start()) + 1))
    return findings
