"""Exit criteria. Each test records one PASS/FAIL line, printed in the pytest
terminal summary. Run this file directly to print the same lines without pytest."""

from __future__ import annotations

import contextlib
import io
import json
import random
import sys
import tempfile
from pathlib import Path

import pytest

from pubgate.cli import EXIT_BLOCKED, EXIT_ERROR, EXIT_PASS, main
from pubgate.engine import scan_project
from pubgate.evaluation.corpus import PLANTED_SECRETS, POLICY_NAMES, generate_corpus
from pubgate.evaluation.metrics import evaluate_corpus
from pubgate.model import Category, Finding, Severity
from pubgate.policy import builtin_policy, evaluate
from pubgate.publish import simulate_publish
from pubgate.report import render_report
from pubgate.snapshot import snapshot_from_mapping

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, tuple[bool, str]] = {}
ORACLE = json.loads((Path(__file__).parent / "fixtures" / "npm_pack_oracle.json").read_text())
PROJECT_IDS = [f"P{i}" for i in range(1, 9)]

PER_CATEGORY = {  # category -> (precision %, recall %, TP, FP)
    Category.SOURCE_MAP: (100.0, 100.0, 3, 0),
    Category.CONFIG: (71.4, 100.0, 5, 2),
    Category.ARTIFACT: (100.0, 100.0, 5, 0),
    Category.SECRET: (100.0, 100.0, 2, 0),
    Category.DEPENDENCY: (100.0, 100.0, 2, 0),
}
PER_PROJECT = {  # project -> (total, critical, high, medium, low)
    "P1": (10, 2, 4, 4, 0), "P2": (15, 6, 1, 8, 0), "P3": (6, 1, 2, 3, 0), "P4": (14, 0, 4, 10, 0),
    "P5": (0, 0, 0, 0, 0), "P6": (13, 0, 4, 9, 0), "P7": (7, 1, 1, 5, 0), "P8": (22, 5, 8, 9, 0),
}


def _record(number: int, ok: bool, detail: str) -> None:
    RESULTS[number] = (ok, detail)
    assert ok, f"criterion {number}: {detail}"


def check_overall_metrics(corpus: Path) -> tuple[bool, str]:
    r = evaluate_corpus(corpus, "default")
    ok = ((r.tp, r.fp, r.fn, r.tn) == (17, 2, 0, 21)
          and abs(r.precision * 100 - 89.47) <= 0.01 and r.recall == 1.0
          and abs(r.f1 * 100 - 94.44) <= 0.01 and r.gate_accuracy == 1.0
          and r.elapsed_seconds < 5)
    return ok, (f"TP={r.tp} FP={r.fp} FN={r.fn} TN={r.tn} P={r.precision * 100:.2f}% R={r.recall * 100:.2f}% "
                f"F1={r.f1 * 100:.2f}% gate={r.gate_accuracy * 100:.0f}% in {r.elapsed_seconds:.2f}s")


def check_per_category(corpus: Path) -> tuple[bool, str]:
    r = evaluate_corpus(corpus, "default")
    bad = []
    for category, (p, rec, tp, fp) in PER_CATEGORY.items():
        m = r.per_category[category]
        if round(m.precision * 100, 1) != p or round(m.recall * 100, 1) != rec or (m.tp, m.fp) != (tp, fp):
            bad.append(f"{category.value}: P={m.precision * 100:.1f} R={m.recall * 100:.1f} TP={m.tp} FP={m.fp}")
    return not bad, "; ".join(bad) or "all five categories match"


def check_per_project(corpus: Path) -> tuple[bool, str]:
    r = evaluate_corpus(corpus, "default")
    observed = {p: tuple(h[k] for k in ("total", "critical", "high", "medium", "low")) for p, h in r.per_project.items()}
    bad = [f"{p}: {observed.get(p)} != {row}" for p, row in PER_PROJECT.items() if observed.get(p) != row]
    return not bad, "; ".join(bad) or "eight rows match"


def check_gate_matrix(corpus: Path) -> tuple[bool, str]:
    decisions = []
    for name in POLICY_NAMES:
        for project, (verdict, _) in evaluate_corpus(corpus, name).gates.items():
            expected = "pass" if project == "P5" else "blocked"
            decisions.append(verdict == expected)
    return len(decisions) == 24 and all(decisions), f"{sum(decisions)}/{len(decisions)} decisions match"


def check_p1_scenario(corpus: Path) -> tuple[bool, str]:
    findings = scan_project(corpus / "P1").findings
    critical = sorted(f.rule_id for f in findings if f.severity is Severity.CRITICAL)
    high = sorted(f.rule_id for f in findings if f.severity is Severity.HIGH)
    blocked = [scan_project(corpus / "P1", builtin_policy(n)).decision.blocked for n in POLICY_NAMES]
    ok = critical == ["CF001", "SM001"] and high == ["AR005", "CF002", "SM002", "SM003"] and all(blocked)
    return ok, f"critical={critical} high={high} blocked under {sum(blocked)}/3 policies"


def _random_findings(rng: random.Random) -> list[Finding]:
    out = []
    for _ in range(rng.randint(0, 20)):
        category = rng.choice(list(Category))
        out.append(Finding(f"{category.rule_prefix}00{rng.randint(1, 6)}", category, rng.choice(list(Severity)),
                           "a.js", "m", "r", line=rng.randint(1, 9)))
    return out


def _monotone(rng: random.Random, trials: int = 2000) -> bool:
    policies = [builtin_policy(n) for n in ("strict", "default", "permissive")]
    for _ in range(trials):
        items = _random_findings(rng)
        s, d, p = (evaluate(items, pol).blocked for pol in policies)
        if (not s and d) or (not d and p):
            return False
    return True


def _deterministic(corpus: Path) -> bool:
    for project in PROJECT_IDS:
        a, b = scan_project(corpus / project), scan_project(corpus / project)
        if render_report(a.findings, a.decision, "json") != render_report(b.findings, b.decision, "json"):
            return False
    return True


def _oracle_agreement() -> tuple[int, int, list[str]]:
    agree, divergent = 0, []
    for name, tree in sorted(ORACLE["trees"].items()):
        files = dict(tree["files"])
        files["package.json"] = json.dumps({"name": "fixture", "version": "1.0.0", **tree["package"]}, indent=2) + "\n"
        if sorted(simulate_publish(snapshot_from_mapping(files)).included) == tree["npm_included"]:
            agree += 1
        else:
            divergent.append(name)
    return agree, len(ORACLE["trees"]), divergent


def _no_secret_leaks(corpus: Path) -> bool:
    for project in PROJECT_IDS:
        result = scan_project(corpus / project)
        for fmt in ("text", "json"):
            output = render_report(result.findings, result.decision, fmt)
            if any(secret.encode() in output for secret in PLANTED_SECRETS):
                return False
    return True


def _quiet_main(argv: list[str]) -> int:
    sink = io.TextIOWrapper(io.BytesIO(), encoding="utf-8")
    with contextlib.redirect_stdout(sink), contextlib.redirect_stderr(io.StringIO()):
        return main(argv)


def _exit_codes(corpus: Path, scratch: Path) -> tuple[bool, int]:
    bad_policy = scratch / "bad_policy.json"
    bad_policy.write_text('{"budgets": {"critical": "lots"}}')
    occupied = scratch / "occupied"
    occupied.mkdir(exist_ok=True)
    (occupied / "x").write_text("x")
    p5 = str(corpus / "P5")
    matrix = [(["scan", p5], EXIT_PASS)]
    matrix += [(["scan", str(corpus / p)], EXIT_BLOCKED) for p in PROJECT_IDS if p != "P5"]
    matrix += [(argv, EXIT_ERROR) for argv in (
        ["scan", str(scratch / "missing")], ["scan", str(bad_policy)], ["scan", p5, "--policy", "nope"],
        ["scan", p5, "--policy-file", str(bad_policy)], ["scan", p5, "--policy-file", str(scratch / "none.json")],
        ["scan", p5, "--format", "yaml"], ["scan", p5, "--max-file-bytes", "-1"], ["bogus"], [],
        ["corpus", "eval", str(scratch / "missing")], ["corpus", "generate", str(occupied)],
    )]
    results = [_quiet_main(argv) == code for argv, code in matrix]
    return all(results), len(results)


def check_properties(corpus: Path, scratch: Path) -> tuple[bool, str]:
    parts = {
        "a": _monotone(random.Random(1234)),
        "b": _deterministic(corpus),
        "d": _no_secret_leaks(corpus),
    }
    agree, total, divergent = _oracle_agreement()
    # one recorded tree is a known divergence (see test_publish); the rest must match npm exactly
    parts["c"] = agree >= 10 and len(divergent) <= 1
    parts["e"], cases = _exit_codes(corpus, scratch)
    detail = (f"(a) {'ok' if parts['a'] else 'FAIL'} (b) {'ok' if parts['b'] else 'FAIL'} "
              f"(c) {agree}/{total} trees agree with npm{' [' + ', '.join(divergent) + ']' if divergent else ''} "
              f"(d) {'ok' if parts['d'] else 'FAIL'} (e) {cases} cases {'ok' if parts['e'] else 'FAIL'}")
    return all(parts.values()), detail


def test_criterion_1_overall_metrics(corpus_dir):
    _record(1, *check_overall_metrics(corpus_dir))


def test_criterion_2_per_category_metrics(corpus_dir):
    _record(2, *check_per_category(corpus_dir))


def test_criterion_3_per_project_histograms(corpus_dir):
    _record(3, *check_per_project(corpus_dir))


def test_criterion_4_gate_matrix(corpus_dir):
    _record(4, *check_gate_matrix(corpus_dir))


def test_criterion_5_leaky_cli_scenario(corpus_dir):
    _record(5, *check_p1_scenario(corpus_dir))


def test_criterion_6_property_suites(corpus_dir, tmp_path):
    _record(6, *check_properties(corpus_dir, tmp_path))


def format_results() -> list[str]:
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        corpus, scratch = Path(tmp) / "corpus", Path(tmp) / "scratch"
        scratch.mkdir()
        generate_corpus(corpus)
        checks = [check_overall_metrics, check_per_category, check_per_project, check_gate_matrix, check_p1_scenario]
        for number, check in enumerate(checks, start=1):
            RESULTS[number] = check(corpus)
        RESULTS[6] = check_properties(corpus, scratch)
    print("\n".join(format_results()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
