"""Packaging configuration drift: whitelist/ignore coverage, tsconfig source maps, Dockerfiles."""

from __future__ import annotations

import json
import posixpath
import re
import shlex
from dataclasses import dataclass, field

import json5

from pubgate.model import Finding
from pubgate.publish import PublishSet, parse_ignore_lines, read_manifest, simulate_publish
from pubgate.rules import make_finding
from pubgate.scanners.common import RISKY_CLASSES, basename, in_vendor_dir, line_of
from pubgate.snapshot import FileRecord, ProjectSnapshot

_TSCONFIG = re.compile(r"^tsconfig(\..+)?\.json$", re.IGNORECASE)
_DOCKERFILE = re.compile(r"^(Dockerfile(\..+)?|.+\.dockerfile)$", re.IGNORECASE)
_COPY = re.compile(r"^\s*(COPY|ADD)\s+(.*)$", re.IGNORECASE)
BROAD_SOURCES = frozenset({".", "./", "*", "./*"})
COMPILED_JS = (".js", ".mjs", ".cjs")


@dataclass(frozen=True)
class DockerfileInfo:
    path: str
    copies_broadly: bool
    line: int | None = None


@dataclass(frozen=True)
class ConfigSurface:
    has_package_json: bool
    has_files_whitelist: bool
    has_npmignore: bool
    has_gitignore: bool
    npmignore_patterns: tuple[str, ...]
    tsconfig_sourcemap_enabled: bool | None
    dockerfiles: tuple[DockerfileInfo, ...]
    has_dockerignore: bool
    tsconfig_path: str | None = None
    tsconfig_outdir: str | None = None
    parse_errors: tuple[tuple[str, str], ...] = field(default=())


def parse_jsonc(text: str):
    """Parse JSON with comments and trailing commas, as tsconfig allows."""
    return json5.loads(text)


def dockerfile_copies(text: str) -> list[tuple[int, list[str]]]:
    """Return (line, sources) for every COPY/ADD that reads from the build context."""
    logical: list[tuple[int, str]] = []
    buf, start = "", None
    for number, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not buf and (not stripped or stripped.startswith("#")):
            continue
        if start is None:
            start = number
        if stripped.endswith("\\"):
            buf += stripped[:-1] + " "
            continue
        logical.append((start, buf + stripped))
        buf, start = "", None
    if buf:
        logical.append((start, buf))

    copies = []
    for number, line in logical:
        match = _COPY.match(line)
        if not match:
            continue
        rest = match.group(2).strip()
        flags = []
        while rest.startswith("--"):
            flag, _, rest = rest.partition(" ")
            flags.append(flag.lower())
            rest = rest.strip()
        if any(f.startswith("--from") for f in flags):
            continue
        if rest.startswith("["):
            try:
                args = [str(a) for a in json.loads(rest)]
            except json.JSONDecodeError:
                continue
        else:
            try:
                args = shlex.split(rest)
            except ValueError:
                args = rest.split()
        if len(args) >= 2:
            copies.append((number, args[:-1]))
    return copies


def _resolve_outdir(tsconfig: str, outdir) -> str | None:
    if not isinstance(outdir, str):
        return None
    base = posixpath.dirname(tsconfig)
    resolved = posixpath.normpath(posixpath.join(base, outdir))
    if resolved in (".", "") or resolved.startswith(".."):
        return None
    return resolved


def read_config_surface(snapshot: ProjectSnapshot) -> ConfigSurface:
    errors: list[tuple[str, str]] = []
    manifest = read_manifest(snapshot)
    if manifest is not None and manifest.parse_error:
        errors.append(("package.json", manifest.parse_error))

    npmignore = snapshot.text(".npmignore")
    enabled: bool | None = None
    ts_path = outdir = None
    dockerfiles = []
    for path, record in snapshot.files.items():
        if in_vendor_dir(path) or record.is_symlink:
            continue
        name = basename(path)
        if _TSCONFIG.match(name):
            try:
                data = parse_jsonc(record.text or "")
                options = data.get("compilerOptions") or {}
                if not isinstance(options, dict):
                    raise ValueError("compilerOptions is not an object")
            except (ValueError, AttributeError) as exc:
                errors.append((path, str(exc)[:80]))
                continue
            if options.get("sourceMap") is True:
                if not enabled:
                    ts_path, outdir = path, _resolve_outdir(path, options.get("outDir"))
                enabled = True
            elif enabled is None:
                enabled = False
        elif _DOCKERFILE.match(name):
            copies = dockerfile_copies(record.text or "")
            broad = [line for line, sources in copies if BROAD_SOURCES.intersection(sources)]
            dockerfiles.append(DockerfileInfo(path, bool(broad), broad[0] if broad else None))

    return ConfigSurface(
        has_package_json=manifest is not None,
        has_files_whitelist=bool(manifest and manifest.files is not None),
        has_npmignore=npmignore is not None,
        has_gitignore=".gitignore" in snapshot.files,
        npmignore_patterns=tuple(parse_ignore_lines(npmignore or "")),
        tsconfig_sourcemap_enabled=enabled,
        dockerfiles=tuple(dockerfiles),
        has_dockerignore=".dockerignore" in snapshot.files,
        tsconfig_path=ts_path,
        tsconfig_outdir=outdir,
        parse_errors=tuple(errors),
    )


def maps_would_ship(snapshot: ProjectSnapshot, publish: PublishSet, outdir: str | None = None) -> bool:
    """Whether source maps emitted next to the shipped JavaScript would be published."""
    if any(p.lower().endswith(".map") for p in publish.included if not in_vendor_dir(p)):
        return True
    probes = {p + ".map" for p in publish.included if p.lower().endswith(COMPILED_JS) and not in_vendor_dir(p)}
    if outdir:
        probes.add(f"{outdir}/index.js.map")
    if not probes:
        probes.add("index.js.map")
    probes = {p for p in probes if p not in snapshot.files}
    if not probes:
        return False
    empty = FileRecord(0, "text", b"")
    what_if = simulate_publish(snapshot.with_files({p: empty for p in probes}))
    return any(p in what_if for p in probes)


def _dockerignore_near(snapshot: ProjectSnapshot, dockerfile: str) -> bool:
    directory = dockerfile.rsplit("/", 1)[0] + "/" if "/" in dockerfile else ""
    return ".dockerignore" in snapshot.files or f"{directory}.dockerignore" in snapshot.files


def scan_config(snapshot: ProjectSnapshot, publish: PublishSet) -> list[Finding]:
    surface = read_config_surface(snapshot)
    findings: list[Finding] = []
    pkg_text = snapshot.text("package.json") or ""

    for path, problem in surface.parse_errors:
        findings.append(make_finding("CF006", path, f"{basename(path)} could not be parsed ({problem})"))

    if surface.has_package_json and not surface.has_files_whitelist and not surface.has_npmignore:
        fallback = " (.gitignore is used as a fallback)" if surface.has_gitignore else ""
        findings.append(make_finding(
            "CF001", "package.json",
            f'no "files" whitelist and no .npmignore; npm decides what ships{fallback}'))

    if surface.tsconfig_sourcemap_enabled and maps_would_ship(snapshot, publish, surface.tsconfig_outdir):
        text = snapshot.text(surface.tsconfig_path) or ""
        findings.append(make_finding(
            "CF002", surface.tsconfig_path,
            "compilerOptions.sourceMap is true and no ignore rule keeps *.map out of the package",
            line=line_of(text, r'["\']?sourceMap["\']?\s*:')))

    shipped = [p for p in sorted(publish.included) if not in_vendor_dir(p) and not snapshot.files[p].is_symlink]
    if publish.has_whitelist:
        for risky in RISKY_CLASSES:
            hits = [p for p in shipped if risky.matches(p) and publish.reason.get(p) == "whitelist"]
            if hits:
                findings.append(make_finding(
                    "CF005", "package.json",
                    f'"files" whitelist ships {risky.name} files: {", ".join(hits[:3])}',
                    line=line_of(pkg_text, r'"files"\s*:'),
                    remediation="Narrow the \"files\" entries or append negated entries: "
                    + ", ".join(f'"!**/{g}"' for g in risky.suggested_lines(hits) if not g.startswith("!"))))
    elif publish.root_ignore_file:
        ignore = publish.root_ignore_file
        for risky in RISKY_CLASSES:
            hits = [p for p in shipped if risky.matches(p)]
            if hits:
                lines = risky.suggested_lines(hits)
                findings.append(make_finding(
                    "CF003", ignore,
                    f"{ignore} does not exclude {risky.name} files: {', '.join(hits[:3])}",
                    remediation=f"Add these lines to {ignore}: " + " ".join(lines)))

    for docker in surface.dockerfiles:
        if docker.copies_broadly and not _dockerignore_near(snapshot, docker.path):
            findings.append(make_finding(
                "CF004", docker.path,
                "COPY/ADD copies the entire build context and there is no .dockerignore",
                line=docker.line))
    return findings
