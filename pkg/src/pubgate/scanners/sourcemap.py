"""Source-map exposure: shipped .map files and residual sourceMappingURL pragmas."""

from __future__ import annotations

import base64
import binascii
import json
import re
import urllib.parse
from dataclasses import dataclass, field

from pubgate.model import Finding
from pubgate.publish import PublishSet
from pubgate.rules import make_finding
from pubgate.scanners.common import in_vendor_dir
from pubgate.snapshot import ProjectSnapshot

COMPILED_SUFFIXES = (".js", ".mjs", ".cjs", ".css")
SAMPLE_LIMIT = 5

# Bundlers put the pragma at EOF, but it is honoured on any line.
_PRAGMA = re.compile(r"^[ \t]*(?://|/\*)[#@][ \t]*sourceMappingURL=([^\s*]*)", re.MULTILINE)
_DATA_URL = re.compile(r"^data:application/json(?:;charset=[\w-]+)?(;base64)?,(.*)$", re.IGNORECASE | re.DOTALL)


@dataclass(frozen=True)
class SourceMapInfo:
    path: str
    parse_ok: bool
    version: int | None = None
    source_count: int = 0
    has_sources_content: bool = False
    embedded_bytes: int = 0
    sample_sources: tuple[str, ...] = ()
    # (source name, content) for every non-empty sourcesContent entry
    embedded: tuple[tuple[str, str], ...] = field(default=(), repr=False)


def _collect(obj: dict, sources: list[str], embedded: list[tuple[str, str]]) -> None:
    # index maps nest regular maps under "sections"
    for section in obj.get("sections") or []:
        if isinstance(section, dict) and isinstance(section.get("map"), dict):
            _collect(section["map"], sources, embedded)
    names = obj.get("sources")
    names = [s if isinstance(s, str) else "" for s in names] if isinstance(names, list) else []
    sources.extend(names)
    contents = obj.get("sourcesContent")
    if isinstance(contents, list):
        for i, text in enumerate(contents):
            if isinstance(text, str) and text:
                name = names[i] if i < len(names) and names[i] else f"<source {i}>"
                embedded.append((name, text))


def parse_source_map(content: bytes | str, path: str = "") -> SourceMapInfo:
    if isinstance(content, bytes):
        content = content.decode("utf-8", errors="replace")
    # some servers prefix maps with an XSSI guard line
    if content.startswith(")]}'"):
        content = content.split("\n", 1)[1] if "\n" in content else ""
    try:
        obj = json.loads(content)
    except (json.JSONDecodeError, RecursionError):
        return SourceMapInfo(path, parse_ok=False)
    if not isinstance(obj, dict):
        return SourceMapInfo(path, parse_ok=False)

    sources: list[str] = []
    embedded: list[tuple[str, str]] = []
    _collect(obj, sources, embedded)
    version = obj.get("version")
    return SourceMapInfo(
        path=path,
        parse_ok=True,
        version=version if isinstance(version, int) and not isinstance(version, bool) else None,
        source_count=len(sources),
        has_sources_content=bool(embedded),
        embedded_bytes=sum(len(text.encode("utf-8")) for _, text in embedded),
        sample_sources=tuple(s for s in sources if s)[:SAMPLE_LIMIT],
        embedded=tuple(embedded),
    )


def decode_data_url(url: str) -> bytes | None:
    match = _DATA_URL.match(url)
    if not match:
        return None
    payload = match.group(2)
    if match.group(1):
        try:
            return base64.b64decode(payload + "=" * (-len(payload) % 4), validate=False)
        except (binascii.Error, ValueError):
            return None
    return urllib.parse.unquote_to_bytes(payload)


def find_mapping_pragmas(text: str) -> list[tuple[int, str]]:
    """Return (line number, url) for each sourceMappingURL pragma."""
    found = []
    for match in _PRAGMA.finditer(text):
        line = text.count("\n", 0, match.start()) + 1
        found.append((line, match.group(1)))
    return found


def is_source_map_path(path: str) -> bool:
    return path.lower().endswith(".map")


def _describe(info: SourceMapInfo) -> str:
    sample = ", ".join(info.sample_sources[:3])
    return f"{info.source_count} source(s), {info.embedded_bytes} bytes embedded" + (f" (e.g. {sample})" if sample else "")


def scan_source_maps(snapshot: ProjectSnapshot, publish: PublishSet) -> list[Finding]:
    findings: list[Finding] = []
    for path, record in snapshot.files.items():
        if in_vendor_dir(path) or record.is_symlink:
            continue
        shipped = path in publish
        lower = path.lower()

        if is_source_map_path(path):
            if record.content is None:
                if shipped:
                    findings.append(make_finding(
                        "SM002", path, f"source map ships with the package ({record.size_bytes} bytes)"))
                    findings.append(make_finding(
                        "SM004", path, "source map is too large to load; its contents were not verified"))
                continue
            info = parse_source_map(record.content, path)
            if shipped:
                findings.append(make_finding("SM002", path, "source map ships with the package"))
                if not info.parse_ok:
                    findings.append(make_finding("SM004", path, "source map is not valid JSON"))
                elif info.has_sources_content:
                    findings.append(make_finding(
                        "SM001", path, f"embedded source content is published: {_describe(info)}"))
            elif info.has_sources_content:
                findings.append(make_finding(
                    "SM005", path, f"unpublished map embeds source: {_describe(info)}"))
            continue

        if shipped and lower.endswith(COMPILED_SUFFIXES):
            text = record.text
            if not text:
                continue
            pragmas = find_mapping_pragmas(text)
            if not pragmas:
                continue
            line, url = pragmas[-1]
            target = "inline data URL" if url.startswith("data:") else (url or "(empty)")
            findings.append(make_finding(
                "SM003", path, f"compiled output references a source map: {target[:80]}", line=line))
            for line, url in pragmas:
                raw = decode_data_url(url) if url.startswith("data:") else None
                if raw is None:
                    continue
                info = parse_source_map(raw, path)
                if info.has_sources_content:
                    findings.append(make_finding(
                        "SM001", path, f"inline source map embeds source: {_describe(info)}", line=line))
    return findings
