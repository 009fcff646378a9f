"""Command-line entry point. Exit codes: 0 pass, 1 blocked, 2 usage/configuration/internal error."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from pubgate import __version__
from pubgate.engine import scan_project
from pubgate.evaluation.corpus import CorpusError, generate_corpus
from pubgate.evaluation.metrics import HarnessError, evaluate_corpus
from pubgate.policy import BUILTIN_POLICIES, ConfigError, Policy, builtin_policy, load_policy_file
from pubgate.report import FORMATS, render_report
from pubgate.rules import RULES
from pubgate.snapshot import DEFAULT_MAX_FILE_BYTES, SnapshotError

EXIT_PASS = 0
EXIT_BLOCKED = 1
EXIT_ERROR = 2

logger = logging.getLogger("pubgate")


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if number <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return number


def _add_policy_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--policy", default=None, help=f"built-in policy: {', '.join(BUILTIN_POLICIES)} (default: default)")
    group.add_argument("--policy-file", default=None, help="JSON policy file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pubgate",
        description="Scan a project before publishing and block the release on risky findings.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--list-rules", action="store_true", help="print the rule catalog and exit")
    parser.add_argument("--explain", metavar="RULE_ID", help="describe one rule and exit")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command")

    scan = sub.add_parser("scan", help="scan a project directory")
    scan.add_argument("path")
    _add_policy_args(scan)
    scan.add_argument("--format", choices=FORMATS, default="text")
    scan.add_argument("--max-file-bytes", type=_positive_int, default=DEFAULT_MAX_FILE_BYTES,
                      help="files above this size are hashed but not loaded")

    corpus = sub.add_parser("corpus", help="generate or evaluate the synthetic corpus")
    corpus_sub = corpus.add_subparsers(dest="corpus_command", required=True)
    gen = corpus_sub.add_parser("generate", help="write the eight fixture projects")
    gen.add_argument("dir")
    gen.add_argument("--force", action="store_true", help="overwrite an existing corpus")
    ev = corpus_sub.add_parser("eval", help="scan the corpus and report detection metrics")
    ev.add_argument("dir")
    _add_policy_args(ev)
    ev.add_argument("--format", choices=FORMATS, default="text")
    return parser


def _resolve_policy(args: argparse.Namespace) -> Policy:
    if args.policy_file:
        return load_policy_file(args.policy_file)
    return builtin_policy(args.policy or "default")


def _list_rules() -> str:
    lines = []
    for rule in RULES.values():
        cwe = rule.cwe or "-"
        lines.append(f"{rule.rule_id}  {rule.default_severity.label:<8}  {rule.category.value:<10}  {cwe:<8}  {rule.title}")
    return "\n".join(lines) + "\n"


def _explain(rule_id: str) -> str:
    rule = RULES.get(rule_id.upper())
    if rule is None:
        raise ConfigError(f"unknown rule id {rule_id!r}; see --list-rules")
    return (
        f"{rule.rule_id}: {rule.title}\n"
        f"category: {rule.category.value}\n"
        f"default severity: {rule.default_severity.label}\n"
        f"CWE: {rule.cwe or 'none'}\n\n"
        f"{rule.description}\n\n"
        f"Remediation: {rule.remediation}\n"
    )


def _write(text: str | bytes) -> None:
    data = text.encode("utf-8") if isinstance(text, str) else text
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def run_scan(args: argparse.Namespace) -> int:
    policy = _resolve_policy(args)
    result = scan_project(args.path, policy, args.max_file_bytes)
    for warning in result.warnings:
        logger.warning("%s", warning)
    _write(render_report(result.findings, result.decision, args.format))
    return EXIT_BLOCKED if result.decision.blocked else EXIT_PASS


def run_corpus(args: argparse.Namespace) -> int:
    if args.corpus_command == "generate":
        manifest = generate_corpus(args.dir, force=args.force)
        _write(f"wrote {len(manifest['projects'])} projects to {args.dir}\n")
        return EXIT_PASS
    report = evaluate_corpus(args.dir, _resolve_policy(args))
    if args.format == "json":
        _write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        _write(report.render_text())
    return EXIT_PASS


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_PASS

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="pubgate: %(levelname)s: %(message)s")
    try:
        if args.list_rules:
            _write(_list_rules())
            return EXIT_PASS
        if args.explain:
            _write(_explain(args.explain))
            return EXIT_PASS
        if args.command == "scan":
            return run_scan(args)
        if args.command == "corpus":
            return run_corpus(args)
        parser.print_usage(sys.stderr)
        print("pubgate: error: a command is required", file=sys.stderr)
        return EXIT_ERROR
    except (ConfigError, SnapshotError, CorpusError, HarnessError) as exc:
        print(f"pubgate: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001 - the exit-code contract covers crashes too
        logger.debug("internal error", exc_info=True)
        print(f"pubgate: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
