from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

from pubgate.publish import simulate_publish
from pubgate.snapshot import ProjectSnapshot, SnapshotError, snapshot_from_mapping, snapshot_project
from tests.conftest import make_snapshot

ORACLE = json.loads((Path(__file__).parent / "fixtures" / "npm_pack_oracle.json").read_text())


def _oracle_snapshot(tree: dict) -> ProjectSnapshot:
    files = dict(tree["files"])
    files["package.json"] = json.dumps({"name": "fixture", "version": "1.0.0", **tree["package"]}, indent=2) + "\n"
    return snapshot_from_mapping(files)


def test_oracle_has_enough_trees():
    assert len(ORACLE["trees"]) >= 10


@pytest.mark.parametrize("name", sorted(ORACLE["trees"]))
def test_publish_set_matches_npm_pack(name, request):
    tree = ORACLE["trees"][name]
    if tree.get("known_divergence"):
        request.applymarker(pytest.mark.xfail(strict=True, reason="directory-exclude plus negated child: npm re-walks the directory"))
    included = sorted(simulate_publish(_oracle_snapshot(tree)).included)
    assert included == tree["npm_included"]


def test_no_manifest_falls_back_to_ignore_rules():
    publish = simulate_publish(snapshot_from_mapping({"index.js": "x", "a.log": "x", ".gitignore": "*.log\n"}))
    assert publish.no_manifest
    assert set(publish) == {"index.js"}


def test_whitelist_reason_and_forced_files():
    snapshot = make_snapshot({"dist/a.js": "x", "src/a.ts": "x", "README.md": "r"}, {"files": ["dist"]})
    publish = simulate_publish(snapshot)
    assert set(publish) == {"dist/a.js", "README.md", "package.json"}
    assert publish.reason["dist/a.js"] == "whitelist"
    assert publish.has_whitelist
    assert "src/a.ts" not in publish.reason


def test_root_ignore_file_reported():
    publish = simulate_publish(make_snapshot({".gitignore": "*.log\n", "a.js": "x"}, {}))
    assert publish.root_ignore_file == ".gitignore"
    publish = simulate_publish(make_snapshot({".gitignore": "*.log\n", ".npmignore": "x\n"}, {}))
    assert publish.root_ignore_file == ".npmignore"


def test_malformed_files_field_warns_and_is_ignored():
    publish = simulate_publish(make_snapshot({"a.js": "x"}, {"files": "dist"}))
    assert "a.js" in publish and not publish.has_whitelist
    assert publish.warnings


def test_snapshot_project_reads_tree(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "a" / "x.js").write_text("hi\n")
    (tmp_path / "bin.dat").write_bytes(b"\x00\x01\x02")
    (tmp_path / "node_modules" / "q").mkdir(parents=True)
    (tmp_path / "node_modules" / "q" / "i.js").write_text("vendor\n")
    snapshot = snapshot_project(tmp_path)
    assert snapshot.files["a/x.js"].text == "hi\n"
    assert snapshot.files["bin.dat"].kind == "binary"
    assert snapshot.files["node_modules/q/i.js"].content is None


def test_snapshot_caps_large_files(tmp_path):
    (tmp_path / "big.js").write_text("x" * 100)
    record = snapshot_project(tmp_path, max_file_bytes=10).files["big.js"]
    assert record.content is None and record.size_bytes == 100 and record.sha256


@pytest.mark.skipif(not hasattr(os, "symlink"), reason="no symlinks")
def test_symlinks_are_recorded_not_followed(tmp_path):
    outside = tmp_path / "outside"
    outside.mkdir()
    (outside / "secret.txt").write_text("s")
    root = tmp_path / "proj"
    root.mkdir()
    (root / "package.json").write_text('{"name":"t","version":"1.0.0"}')
    os.symlink(outside, root / "linked")
    snapshot = snapshot_project(root)
    assert snapshot.files["linked"].is_symlink
    assert "linked/secret.txt" not in snapshot.files
    assert "linked" not in simulate_publish(snapshot)


def test_snapshot_of_missing_directory_fails(tmp_path):
    with pytest.raises(SnapshotError):
        snapshot_project(tmp_path / "missing")
