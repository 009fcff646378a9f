"""Simulation of the file list `npm pack` would produce for a snapshot.

Rule sets are evaluated per directory level, root first, in npm's order:
built-in defaults, the package.json "files" whitelist (root only), the
directory's .npmignore (or its .gitignore when no .npmignore exists), then
the strict rules. A rule set at a deeper level overrides shallower ones.
Root ignore files are not consulted when a whitelist is present.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import pathspec

from pubgate.snapshot import ProjectSnapshot

# Applied at every directory level, before ignore files.
DEFAULT_IGNORES = (
    ".npmignore",
    ".gitignore",
    ".git",
    ".svn",
    ".hg",
    "CVS",
    "/.lock-wscript",
    "/.wafpickle-*",
    "/build/config.gypi",
    "npm-debug.log",
    ".npmrc",
    ".*.swp",
    ".DS_Store",
    "._*",
    "*.orig",
    "/archived-packages/",
)

# Root level, after ignore files; nothing can re-include these.
STRICT_EXCLUDES = (
    "/.git",
    "/node_modules",
    ".npmrc",
    "/package-lock.json",
    "/yarn.lock",
    "/pnpm-lock.yaml",
)

_FORCED_NAME = re.compile(r"^(readme|copying|license|licence)(\.[^/]*[^~$/])?$", re.IGNORECASE)

REASON_WHITELIST = "whitelist"
REASON_DEFAULT = "default"
REASON_NOT_IGNORED = "not_ignored"
REASON_FORCED = "forced"


def _spec(lines) -> pathspec.PathSpec:
    # "gitwildmatch" is deprecated in pathspec 1.x, but the replacement factories
    # stop "!/*" from matching paths below a directory, which npm relies on.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        return pathspec.PathSpec.from_lines("gitwildmatch", [ln.lower() for ln in lines])


_DEFAULT_SPEC = _spec(DEFAULT_IGNORES)
_STRICT_SPEC = _spec(STRICT_EXCLUDES)


def parse_ignore_lines(text: str) -> list[str]:
    rules = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            rules.append(line)
    return rules


def _normalize_entry(entry: str) -> str:
    entry = entry.strip()
    while entry.startswith("./"):
        entry = entry[2:]
    return entry


def _whitelist_line(entry: str) -> str:
    """Translate a "files" entry into an ignore-style line (whitelisting is re-inclusion)."""
    negated = entry.startswith("!")
    body = _normalize_entry(entry.lstrip("!"))
    if body.endswith("/*"):
        body += "*"
    if not body.startswith("/") and not body.startswith("**"):
        body = "/" + body
    return body if negated else "!" + body


@dataclass(frozen=True)
class Manifest:
    """The package.json fields that influence packing."""

    data: Mapping
    files: tuple[str, ...] | None
    required: frozenset[str]
    warnings: tuple[str, ...] = ()
    parse_error: str | None = None


def read_manifest(snapshot: ProjectSnapshot) -> Manifest | None:
    text = snapshot.text("package.json")
    if text is None:
        return None
    warnings: list[str] = []
    parse_error = None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        parse_error = f"invalid JSON: {exc.msg} at line {exc.lineno}"
        data = {}
    if not isinstance(data, dict):
        parse_error = "root is not an object"
        data = {}
    if parse_error:
        warnings.append(f"package.json: {parse_error}")

    files = data.get("files")
    if files is not None and not (isinstance(files, list) and all(isinstance(f, str) for f in files)):
        warnings.append('package.json: "files" is not a list of strings; ignoring it')
        files = None

    required = {"package.json"}
    for key in ("main", "browser"):
        if isinstance(data.get(key), str):
            required.add(_normalize_entry(data[key]).lstrip("/"))
    bin_field = data.get("bin")
    if isinstance(bin_field, str):
        required.add(_normalize_entry(bin_field).lstrip("/"))
    elif isinstance(bin_field, dict):
        required.update(_normalize_entry(v).lstrip("/") for v in bin_field.values() if isinstance(v, str))
    if files:
        for entry in files:
            name = _normalize_entry(entry).lstrip("/")
            if not entry.startswith("!") and name in snapshot.files:
                required.add(name)
    return Manifest(
        data, tuple(files) if files is not None else None, frozenset(required), tuple(warnings), parse_error
    )


@dataclass(frozen=True)
class PublishSet:
    included: frozenset[str]
    reason: Mapping[str, str]
    no_manifest: bool = False
    has_whitelist: bool = False
    ignore_files: tuple[str, ...] = ()
    root_ignore_file: str | None = None
    warnings: tuple[str, ...] = field(default=())

    def __contains__(self, path: str) -> bool:
        return path in self.included

    def __iter__(self):
        return iter(sorted(self.included))

    def __len__(self) -> int:
        return len(self.included)


class _Packer:
    def __init__(self, snapshot: ProjectSnapshot):
        self.snapshot = snapshot
        self.manifest = read_manifest(snapshot)
        self.whitelist = None
        if self.manifest and self.manifest.files is not None:
            self.whitelist = _spec(["*"] + [_whitelist_line(e) for e in self.manifest.files])
        self._ignore_cache: dict[str, tuple[str | None, pathspec.PathSpec | None]] = {}
        self._dir_cache: dict[str, bool] = {}

    def ignore_for(self, directory: str) -> tuple[str | None, pathspec.PathSpec | None]:
        if directory not in self._ignore_cache:
            found: tuple[str | None, pathspec.PathSpec | None] = (None, None)
            if not (directory == "" and self.whitelist is not None):
                for name in (".npmignore", ".gitignore"):
                    path = f"{directory}/{name}" if directory else name
                    if path in self.snapshot.files:
                        text = self.snapshot.text(path) or ""
                        found = (path, _spec(parse_ignore_lines(text)))
                        break
            self._ignore_cache[directory] = found
        return self._ignore_cache[directory]

    def dir_excluded(self, directory: str) -> bool:
        """True when ignore files above *directory* exclude it; npm never walks into it."""
        if directory not in self._dir_cache:
            parts = directory.split("/")
            excluded = False
            for depth in range(len(parts)):
                if depth and self.dir_excluded("/".join(parts[:depth])):
                    excluded = True
                    break
                _, spec = self.ignore_for("/".join(parts[:depth]))
                if spec is not None:
                    hit = spec.check_file("/".join(parts[depth:]).lower() + "/").include
                    if hit is not None:
                        excluded = hit
            self._dir_cache[directory] = excluded
        return self._dir_cache[directory]

    def is_forced(self, path: str) -> bool:
        if self.manifest is not None and path in self.manifest.required:
            return True
        return "/" not in path and bool(_FORCED_NAME.match(path))

    def decide(self, path: str) -> tuple[bool, str | None, list[str]]:
        """Return (included, reason, ignore files consulted)."""
        consulted: list[str] = []
        if self.snapshot.files[path].is_symlink:
            return False, None, consulted
        if self.is_forced(path):
            return True, REASON_FORCED, consulted

        parts = path.split("/")
        included = True
        for depth in range(len(parts)):
            directory = "/".join(parts[:depth])
            if depth and self.dir_excluded(directory):
                return False, None, consulted
            rel = "/".join(parts[depth:]).lower()
            hit = _DEFAULT_SPEC.check_file(rel).include
            if hit is not None:
                included = not hit
            if depth == 0 and self.whitelist is not None:
                hit = self.whitelist.check_file(rel).include
                if hit is not None:
                    included = not hit
            ignore_path, spec = self.ignore_for(directory)
            if spec is not None:
                consulted.append(ignore_path)
                hit = spec.check_file(rel).include
                if hit is not None:
                    included = not hit
            if depth == 0:
                hit = _STRICT_SPEC.check_file(rel).include
                if hit:
                    included = False

        if not included:
            return False, None, consulted
        if self.whitelist is not None:
            return True, REASON_WHITELIST, consulted
        return True, (REASON_NOT_IGNORED if consulted else REASON_DEFAULT), consulted


def simulate_publish(snapshot: ProjectSnapshot) -> PublishSet:
    packer = _Packer(snapshot)
    included = set()
    reasons = {}
    consulted_all: set[str] = set()
    for path in snapshot.files:
        ok, why, consulted = packer.decide(path)
        consulted_all.update(consulted)
        if ok:
            included.add(path)
            reasons[path] = why
    manifest = packer.manifest
    return PublishSet(
        included=frozenset(included),
        reason=MappingProxyType(reasons),
        no_manifest=manifest is None,
        has_whitelist=packer.whitelist is not None,
        ignore_files=tuple(sorted(consulted_all)),
        root_ignore_file=packer.ignore_for("")[0],
        warnings=manifest.warnings if manifest else (),
    )
