from __future__ import annotations

import base64
import json

from pubgate.scanners.sourcemap import decode_data_url, find_mapping_pragmas, parse_source_map, scan_source_maps
from tests.conftest import snapshot_and_publish

WITH_CONTENT = json.dumps({"version": 3, "sources": ["a.ts"], "mappings": "AAAA", "sourcesContent": ["let x=1"]})
POSITIONAL = json.dumps({"version": 3, "sources": ["a.ts"], "mappings": "AAAA"})


def _rules(findings):
    return sorted((f.rule_id, f.severity.label, f.file) for f in findings)


def test_parse_with_sources_content():
    info = parse_source_map(WITH_CONTENT.encode())
    assert info.parse_ok and info.has_sources_content and info.source_count == 1
    assert info.version == 3 and info.embedded_bytes == len("let x=1")


def test_parse_positional_only():
    info = parse_source_map(POSITIONAL.encode())
    assert info.parse_ok and not info.has_sources_content


def test_parse_invalid_json():
    assert not parse_source_map(b"not json{").parse_ok
    assert not parse_source_map(b"[1, 2]").parse_ok


def test_all_null_sources_content_is_not_content():
    info = parse_source_map(b'{"sourcesContent":[null,null]}')
    assert info.parse_ok and not info.has_sources_content


def test_index_map_sections_are_walked():
    index = {"version": 3, "sections": [{"offset": {"line": 0, "column": 0}, "map": json.loads(WITH_CONTENT)}]}
    info = parse_source_map(json.dumps(index))
    assert info.has_sources_content and info.sample_sources == ("a.ts",)


def test_sample_sources_capped_at_five():
    obj = {"version": 3, "sources": [f"s{i}.ts" for i in range(9)], "mappings": ""}
    assert len(parse_source_map(json.dumps(obj)).sample_sources) == 5


def test_pragmas_found_with_line_numbers():
    text = "a();\n//# sourceMappingURL=a.js.map\n/*# sourceMappingURL=b.css.map */\n"
    assert find_mapping_pragmas(text) == [(2, "a.js.map"), (3, "b.css.map")]
    assert find_mapping_pragmas("var s = 'sourceMappingURL=x';\n") == []


def test_data_url_decoding():
    payload = base64.b64encode(WITH_CONTENT.encode()).decode()
    assert decode_data_url(f"data:application/json;charset=utf-8;base64,{payload}") == WITH_CONTENT.encode()
    assert decode_data_url("data:text/plain,hi") is None


def test_leak_shape_emits_sm001_sm002_sm003():
    snapshot, publish = snapshot_and_publish(
        {"cli.js": "run();\n//# sourceMappingURL=cli.js.map\n", "cli.js.map": WITH_CONTENT}, {})
    assert _rules(scan_source_maps(snapshot, publish)) == [
        ("SM001", "critical", "cli.js.map"),
        ("SM002", "high", "cli.js.map"),
        ("SM003", "high", "cli.js"),
    ]


def test_no_maps_no_findings():
    snapshot, publish = snapshot_and_publish({"cli.js": "run();\n"}, {})
    assert scan_source_maps(snapshot, publish) == []


def test_excluded_positional_map_is_silent():
    snapshot, publish = snapshot_and_publish({".npmignore": "*.map\n", "a.js.map": POSITIONAL}, {})
    assert scan_source_maps(snapshot, publish) == []


def test_excluded_map_with_content_is_medium():
    snapshot, publish = snapshot_and_publish({".npmignore": "*.map\n", "a.js.map": WITH_CONTENT}, {})
    assert _rules(scan_source_maps(snapshot, publish)) == [("SM005", "medium", "a.js.map")]


def test_unparseable_shipped_map():
    snapshot, publish = snapshot_and_publish({"a.js.map": "{oops"}, {})
    assert _rules(scan_source_maps(snapshot, publish)) == [("SM002", "high", "a.js.map"), ("SM004", "low", "a.js.map")]


def test_inline_data_url_with_content_is_sm001():
    payload = base64.b64encode(WITH_CONTENT.encode()).decode()
    snapshot, publish = snapshot_and_publish(
        {"a.js": f"x();\n//# sourceMappingURL=data:application/json;base64,{payload}\n"}, {})
    assert _rules(scan_source_maps(snapshot, publish)) == [("SM001", "critical", "a.js"), ("SM003", "high", "a.js")]


def test_removing_map_from_publish_set_clears_sm001_and_sm002():
    files = {"cli.js.map": WITH_CONTENT}
    snapshot, publish = snapshot_and_publish(files, {})
    assert {"SM001", "SM002"} <= {f.rule_id for f in scan_source_maps(snapshot, publish)}
    snapshot, publish = snapshot_and_publish({**files, ".npmignore": "*.map\n"}, {})
    assert not {"SM001", "SM002"} & {f.rule_id for f in scan_source_maps(snapshot, publish)}
