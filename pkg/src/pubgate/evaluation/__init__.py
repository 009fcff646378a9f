"""Synthetic corpus generation and detection metrics."""

from __future__ import annotations

from pubgate.evaluation.corpus import PROJECTS, CorpusError, GroundTruth, generate_corpus, load_manifest
from pubgate.evaluation.metrics import Cell, HarnessError, MetricsReport, compute_metrics, evaluate_corpus

__all__ = [
    "PROJECTS",
    "Cell",
    "CorpusError",
    "GroundTruth",
    "HarnessError",
    "MetricsReport",
    "compute_metrics",
    "evaluate_corpus",
    "generate_corpus",
    "load_manifest",
]
