from __future__ import annotations

import pytest

from pubgate.evaluation.corpus import generate_corpus
from pubgate.publish import simulate_publish
from pubgate.snapshot import snapshot_from_mapping


def make_snapshot(files: dict, package: dict | None = None):
    """Build an in-memory snapshot; *package* adds a package.json."""
    import json

    files = dict(files)
    if package is not None:
        files["package.json"] = json.dumps({"name": "t", "version": "1.0.0", **package}, indent=2)
    return snapshot_from_mapping(files)


def snapshot_and_publish(files: dict, package: dict | None = None):
    snapshot = make_snapshot(files, package)
    return snapshot, simulate_publish(snapshot)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    generate_corpus(out, force=True)
    return out


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.format_results():
            terminalreporter.write_line(line)
