"""Cell-level detection metrics and gate accuracy over the corpus."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from pubgate.engine import ScanResult, scan_project
from pubgate.evaluation.corpus import POLICY_NAMES, GroundTruth, load_manifest
from pubgate.model import Category, Severity
from pubgate.policy import Policy, builtin_policy


class HarnessError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    project_id: str
    category: Category
    expected: tuple[int, int]
    observed: int

    @property
    def positive(self) -> bool:
        return self.expected[0] >= 1

    @property
    def outcome(self) -> str:
        if self.positive:
            return "tp" if self.observed >= self.expected[0] else "fn"
        return "fp" if self.observed > 0 else "tn"


@dataclass(frozen=True)
class CategoryMetrics:
    precision: float
    recall: float
    tp: int
    fp: int
    fn: int
    precision_undefined: bool = False


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float
    gate_accuracy: float
    per_category: Mapping[Category, CategoryMetrics]
    precision_undefined: bool = False
    calibration_warnings: tuple[str, ...] = ()
    policy: str = ""
    # project id -> severity histogram and total, project id -> (verdict, expected)
    per_project: Mapping[str, Mapping[str, int]] = field(default_factory=dict)
    gates: Mapping[str, tuple[str, str]] = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "cells": {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn},
            "precision": round(self.precision, 6),
            "recall": round(self.recall, 6),
            "f1": round(self.f1, 6),
            "precision_undefined": self.precision_undefined,
            "gate_accuracy": round(self.gate_accuracy, 6),
            "per_category": {
                c.value: {
                    "precision": round(m.precision, 6), "recall": round(m.recall, 6),
                    "tp": m.tp, "fp": m.fp, "fn": m.fn,
                }
                for c, m in self.per_category.items()
            },
            "per_project": {p: dict(h) for p, h in self.per_project.items()},
            "gates": {p: {"verdict": v, "expected": e} for p, (v, e) in self.gates.items()},
            "calibration_warnings": list(self.calibration_warnings),
        }

    def render_text(self) -> str:
        out = [f"policy: {self.policy}",
               f"cells: TP={self.tp} FP={self.fp} FN={self.fn} TN={self.tn}",
               f"precision {self.precision * 100:.2f}%  recall {self.recall * 100:.2f}%  "
               f"F1 {self.f1 * 100:.2f}%  gate accuracy {self.gate_accuracy * 100:.2f}%",
               "",
               f"{'category':<12} {'precision':>9} {'recall':>7} {'TP':>3} {'FP':>3} {'FN':>3}"]
        for c, m in self.per_category.items():
            out.append(f"{c.value:<12} {m.precision * 100:>8.1f}% {m.recall * 100:>6.1f}% {m.tp:>3} {m.fp:>3} {m.fn:>3}")
        if self.per_project:
            out += ["", f"{'project':<8} {'total':>5} {'crit':>4} {'high':>4} {'med':>4} {'low':>4} {'gate':>8}"]
            for p, h in self.per_project.items():
                verdict = self.gates.get(p, ("", ""))[0]
                out.append(f"{p:<8} {h['total']:>5} {h['critical']:>4} {h['high']:>4} {h['medium']:>4} {h['low']:>4} {verdict:>8}")
        for warning in self.calibration_warnings:
            out.append(f"warning: {warning}")
        return "\n".join(out) + "\n"


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 1.0, True
    return num / den, False


def compute_metrics(cells: Iterable[Cell], gate_results: Mapping[str, tuple[str, str]] | None = None) -> MetricsReport:
    """Aggregate per-(project, category) cells. Every pair must appear exactly once."""
    cells = list(cells)
    if not cells:
        raise HarnessError("no cells to evaluate")
    keys = Counter((c.project_id, c.category) for c in cells)
    duplicates = sorted(f"{p}/{c.value}" for (p, c), n in keys.items() if n > 1)
    if duplicates:
        raise HarnessError(f"duplicate cells: {', '.join(duplicates)}")
    projects = sorted({c.project_id for c in cells})
    missing = [f"{p}/{c.value}" for p in projects for c in Category if (p, c) not in keys]
    if missing:
        raise HarnessError(f"missing cells: {', '.join(missing)}")

    outcomes = Counter(c.outcome for c in cells)
    tp, fp, fn, tn = (outcomes[k] for k in ("tp", "fp", "fn", "tn"))
    precision, undefined = _ratio(tp, tp + fp)
    recall, _ = _ratio(tp, tp + fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0

    per_category = {}
    for category in Category:
        sub = Counter(c.outcome for c in cells if c.category == category)
        p, p_undef = _ratio(sub["tp"], sub["tp"] + sub["fp"])
        r, _ = _ratio(sub["tp"], sub["tp"] + sub["fn"])
        per_category[category] = CategoryMetrics(p, r, sub["tp"], sub["fp"], sub["fn"], p_undef)

    warnings = tuple(
        f"{c.project_id}/{c.category.value}: observed {c.observed} above expected max {c.expected[1]}"
        for c in cells if c.positive and c.observed > c.expected[1]
    )
    gate_results = dict(gate_results or {})
    gate_accuracy = (
        sum(verdict == expected for verdict, expected in gate_results.values()) / len(gate_results)
        if gate_results else 1.0
    )
    return MetricsReport(
        tp=tp, fp=fp, fn=fn, tn=tn,
        precision=precision, recall=recall, f1=f1,
        gate_accuracy=gate_accuracy,
        per_category=per_category,
        precision_undefined=undefined,
        calibration_warnings=warnings,
        gates=gate_results,
    )


def histogram(result: ScanResult) -> dict[str, int]:
    counts = {s.label: result.decision.counts[s] for s in sorted(Severity, reverse=True)}
    return {"total": sum(counts.values()), **counts}


def cells_for(project_id: str, truth: GroundTruth, result: ScanResult) -> list[Cell]:
    observed = Counter(f.category for f in result.findings)
    return [Cell(project_id, c, truth.expected[c], observed[c]) for c in Category]


def evaluate_corpus(corpus_dir: str | Path, policy: Policy | str = "default") -> MetricsReport:
    policy = builtin_policy(policy) if isinstance(policy, str) else policy
    if policy.name not in POLICY_NAMES:
        # custom policies have no ground-truth gate; fall back to the default expectation
        expected_key = "default"
    else:
        expected_key = policy.name
    started = time.perf_counter()
    cells: list[Cell] = []
    gates: dict[str, tuple[str, str]] = {}
    per_project: dict[str, dict[str, int]] = {}
    for project_id, path, truth in load_manifest(corpus_dir):
        result = scan_project(path, policy)
        cells.extend(cells_for(project_id, truth, result))
        gates[project_id] = (result.decision.verdict, truth.expected_gate[expected_key])
        per_project[project_id] = histogram(result)
    report = compute_metrics(cells, gates)
    return MetricsReport(**{
        **report.__dict__,
        "policy": policy.name,
        "per_project": per_project,
        "elapsed_seconds": time.perf_counter() - started,
    })
